import json

import pytest

from toeplitz_lab.errors import ScenarioFormatError
from toeplitz_lab.hardy import WoldVector
from toeplitz_lab.lab import THEOREMS
from toeplitz_lab.lab import Parameters
from toeplitz_lab.lab import Scenario
from toeplitz_lab.lab import generate
from toeplitz_lab.lab import pack_vectors
from toeplitz_lab.lab import unpack_vectors


@pytest.mark.unit
def test_theorem_ids():
    assert len(THEOREMS) == 11
    assert THEOREMS[0] == "thm32"
    assert "c0decay" in THEOREMS


@pytest.mark.unit
def test_scenario_id():
    assert Scenario(7, "thm45").scenario_id == "thm45-7"


@pytest.mark.unit
def test_dumps_is_canonical(small):
    scenario = generate(3, "thm32", small)
    text = scenario.dumps()

    assert Scenario.loads(text).dumps() == text
    assert list(json.loads(text)) == sorted(json.loads(text))


@pytest.mark.unit
def test_save_and_load(tmp_path, small):
    scenario = generate(5, "thm313", small)
    path = tmp_path / "scenario.json"

    scenario.save(path)

    assert path.read_text(encoding="utf-8").endswith("\n")
    assert Scenario.load(path).dumps() == scenario.dumps()


@pytest.mark.unit
def test_load_missing(tmp_path):
    with pytest.raises(ScenarioFormatError, match="Cannot read"):
        Scenario.load(tmp_path / "missing.json")


@pytest.mark.unit
@pytest.mark.parametrize(
    ("text", "match"),
    [
        ("{", "not valid JSON"),
        ("[]", "root must be an object"),
        ('{"schema_version": 2}', "schema version"),
        ('{"schema_version": 1, "theorem": "thm99"}', "Unknown theorem"),
        ('{"schema_version": 1, "theorem": "thm32"}', "Malformed"),
    ],
)
def test_loads_rejects(text, match):
    with pytest.raises(ScenarioFormatError, match=match):
        Scenario.loads(text)


@pytest.mark.unit
def test_parameters_reject_unknown_fields():
    with pytest.raises(ScenarioFormatError, match="parameters"):
        Parameters.from_json({"l": 1, "width": 3})


@pytest.mark.unit
def test_parameters_round_trip():
    params = Parameters(l=2, lp=3, m=2, k=2, origin_only=True)

    assert Parameters.from_json(params.to_json()) == params


@pytest.mark.unit
def test_vector_payloads(shift_frame, random_vector):
    vectors = [random_vector(shift_frame) for _ in range(2)]
    restored = unpack_vectors(shift_frame, pack_vectors(vectors))

    assert all(isinstance(v, WoldVector) for v in restored)
    assert [v.coords.tolist() for v in restored] == [
        v.coords.tolist() for v in vectors
    ]

    with pytest.raises(ScenarioFormatError, match="frame of 5"):
        unpack_vectors(shift_frame.with_blocks(5), pack_vectors(vectors))
