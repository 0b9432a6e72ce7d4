import json

import pytest
from typer.testing import CliRunner

from toeplitz_lab.__about__ import __version__
from toeplitz_lab.lab import Ledger
from toeplitz_lab.lab._cli import app

SMALL = ["--blocks", "4", "--taylor-degree", "80"]


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def scenario_file(runner, tmp_path):
    path = tmp_path / "scenario.json"
    result = runner.invoke(
        app,
        ["gen", "--seed", "1", "--theorem", "thm32", "--out", str(path), *SMALL],
    )
    assert result.exit_code == 0, result.output
    return path


@pytest.mark.unit
def test_version(runner):
    result = runner.invoke(app, ["--version"])

    assert result.exit_code == 0
    assert __version__ in result.output


@pytest.mark.unit
def test_gen(scenario_file):
    payload = json.loads(scenario_file.read_text())

    assert payload["schema_version"] == 1
    assert payload["theorem"] == "thm32"
    assert payload["parameters"]["blocks"] == 4


@pytest.mark.unit
def test_gen_rejects_caps(runner, tmp_path):
    out = tmp_path / "scenario.json"
    result = runner.invoke(
        app,
        ["gen", "--seed", "1", "--theorem", "thm32", "--out", str(out), "--l", "4"],
    )

    assert result.exit_code == 2
    assert "Error: Parameter l=4" in result.output
    assert not out.exists()


@pytest.mark.unit
def test_gen_rejects_unknown_theorem(runner, tmp_path):
    result = runner.invoke(
        app,
        ["gen", "--seed", "1", "--theorem", "thm99", "--out", str(tmp_path / "x")],
    )

    assert result.exit_code == 2


@pytest.mark.unit
def test_run(runner, scenario_file, tmp_path):
    ledger = tmp_path / "ledger.jsonl"
    result = runner.invoke(
        app, ["run", "--in", str(scenario_file), "--ledger", str(ledger)]
    )

    assert result.exit_code == 0, result.output
    line = json.loads(result.stdout.strip().splitlines()[-1])
    assert line["scenario_id"] == "thm32-1"
    assert line["result"]["status"] == "pass"
    assert [r.scenario_id for r in Ledger(ledger).records()] == ["thm32-1"]


@pytest.mark.unit
def test_run_strict_tolerance(runner, scenario_file):
    result = runner.invoke(
        app, ["run", "--in", str(scenario_file), "--tol", "1e-30"]
    )

    assert result.exit_code in {1, 2}


@pytest.mark.unit
def test_run_bad_file(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")

    result = runner.invoke(app, ["run", "--in", str(path)])

    assert result.exit_code == 2
    assert "Error: Scenario is not valid JSON" in result.output


@pytest.mark.unit
def test_suite_json(runner, tmp_path):
    ledger = tmp_path / "ledger.jsonl"
    result = runner.invoke(
        app,
        [
            "suite",
            "--theorem",
            "lemma39",
            "--trials",
            "3",
            "--workers",
            "2",
            "--ledger",
            str(ledger),
            "--json",
            *SMALL,
        ],
    )

    assert result.exit_code == 0, result.output
    (summary,) = [json.loads(line) for line in result.stdout.splitlines()]
    assert summary["theorem"] == "lemma39"
    assert summary["total"] == summary["passed"] == 3
    assert len(Ledger(ledger).records()) == 3


@pytest.mark.unit
def test_suite_table(runner):
    result = runner.invoke(
        app, ["suite", "--theorem", "c0decay", "--trials", "2", *SMALL]
    )

    assert result.exit_code == 0, result.output
    assert "Verification" in result.output
    assert "FAIL" not in result.output


@pytest.mark.unit
def test_report(runner, tmp_path, make_record):
    ledger = Ledger(tmp_path / "ledger.jsonl")
    ledger.append(make_record(seed=1))
    ledger.append(make_record("fail", seed=2))

    result = runner.invoke(app, ["report", "--ledger", str(ledger.path), "--json"])

    assert result.exit_code == 1
    assert "FAIL thm32-2 seed=2" in result.output
    summary = json.loads(result.stdout.splitlines()[0])
    assert summary["failed"] == 1


@pytest.mark.unit
def test_report_invalid_only(runner, tmp_path, make_record):
    ledger = Ledger(tmp_path / "ledger.jsonl")
    ledger.append(make_record("invalid-instance"))

    result = runner.invoke(app, ["report", "--ledger", str(ledger.path)])

    assert result.exit_code == 2


@pytest.mark.unit
@pytest.mark.parametrize("command", ["report", "view"])
def test_missing_ledger(runner, tmp_path, command):
    result = runner.invoke(app, [command, "--ledger", str(tmp_path / "none")])

    assert result.exit_code == 2
    assert "Error: Cannot read ledger" in result.output


@pytest.mark.unit
def test_report_empty_ledger(runner, tmp_path):
    ledger = tmp_path / "ledger.jsonl"
    ledger.write_text("")

    result = runner.invoke(app, ["report", "--ledger", str(ledger), "--json"])

    assert result.exit_code == 0, result.output
    (summary,) = [json.loads(line) for line in result.stdout.splitlines()]
    assert summary["theorem"] == "all"
    assert summary["total"] == summary["passed"] == 0

    table = runner.invoke(app, ["report", "--ledger", str(ledger)])
    assert table.exit_code == 0
    assert "Verification" in table.output
