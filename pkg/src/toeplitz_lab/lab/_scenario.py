"""Scenario files: a seeded theorem instance and the data to replay it."""

from __future__ import annotations

import json
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from typing import TYPE_CHECKING
from typing import Any
from typing import Final
from typing import Literal
from typing import get_args

from toeplitz_lab._exceptions import ScenarioFormatError
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._utility import array_to_pairs
from toeplitz_lab._utility import pairs_to_array
from toeplitz_lab.constants import ACCEPTANCE_TOL
from toeplitz_lab.constants import DEFAULT_BLOCKS
from toeplitz_lab.constants import DEFAULT_GUARD
from toeplitz_lab.constants import DEFAULT_TAYLOR_DEGREE
from toeplitz_lab.constants import SCHEMA_VERSION

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from toeplitz_lab._hardy import WoldFrame

TheoremId = Literal[
    "thm32",
    "thm36",
    "thm37",
    "thm310",
    "lemma39",
    "lemma36",
    "thm313",
    "thm42",
    "thm44",
    "thm45",
    "c0decay",
]

THEOREMS: Final[tuple[TheoremId, ...]] = get_args(TheoremId)


def pack_vectors(vectors: Sequence[WoldVector]) -> list[dict[str, Any]]:
    """Coordinates of frame vectors as `[re, im]` payloads."""
    return [array_to_pairs(v.coords) for v in vectors]


def unpack_vectors(
    frame: WoldFrame, items: Sequence[dict[str, Any]]
) -> list[WoldVector]:
    """Inverse of [pack_vectors][toeplitz_lab.lab.pack_vectors].

    Raises:
        ScenarioFormatError: If a payload does not fit the frame.
    """
    vectors: list[WoldVector] = []
    for item in items:
        coords = pairs_to_array(item)
        if coords.size != frame.dim:
            msg = f"Vector of length {coords.size} on frame of {frame.dim}."
            raise ScenarioFormatError(msg)
        vectors.append(WoldVector(frame, coords))
    return vectors


@dataclass(frozen=True)
class Parameters:
    """Size parameters of a generated instance.

    Params:
        l: Degree of `B`.
        lp: Degree of `B′`.
        m: Fiber dimension.
        k: Perturbation rank, or defect `n` for the defect theorems.
        blocks: Wold block count `N`.
        taylor_degree: Taylor truncation degree `D`.
        guard: Top blocks kept empty for forward shift instances.
        tolerance: Acceptance level of every check.
        origin_only: Place every zero of `B` at the origin.
        orthogonal: Draw the perturbation left factors orthogonal to `M`.
    """

    l: int = 1
    lp: int = 1
    m: int = 1
    k: int = 1
    blocks: int = DEFAULT_BLOCKS
    taylor_degree: int = DEFAULT_TAYLOR_DEGREE
    guard: int = DEFAULT_GUARD
    tolerance: float = ACCEPTANCE_TOL
    origin_only: bool = False
    orthogonal: bool = False

    def to_json(self) -> dict[str, Any]:
        """Field mapping."""
        return asdict(self)

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> Parameters:
        """Inverse of [to_json][toeplitz_lab.lab.Parameters.to_json].

        Raises:
            ScenarioFormatError: On unknown or mistyped fields.
        """
        try:
            return cls(**payload)
        except TypeError as err:
            msg = f"Invalid scenario parameters: {err}."
            raise ScenarioFormatError(msg) from err


@dataclass(frozen=True)
class Scenario:
    """A seeded instance of one theorem.

    Params:
        seed: Unsigned 64-bit seed of the generator.
        theorem: Theorem the instance is built for.
        parameters: Sizes and tolerance.
        payload: Serialized products, vectors and subspaces.
        schema_version: Format version of the file.
    """

    seed: int
    theorem: TheoremId
    parameters: Parameters = field(default_factory=Parameters)
    payload: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def scenario_id(self) -> str:
        """Identifier of the form `theorem-seed`."""
        return f"{self.theorem}-{self.seed}"

    def to_json(self) -> dict[str, Any]:
        """Serializable form with the schema version first."""
        return {
            "schema_version": self.schema_version,
            "seed": self.seed,
            "theorem": self.theorem,
            "parameters": self.parameters.to_json(),
            "payload": self.payload,
        }

    def dumps(self) -> str:
        """Canonical JSON text with sorted keys."""
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> Scenario:
        """Inverse of [to_json][toeplitz_lab.lab.Scenario.to_json].

        Raises:
            ScenarioFormatError: If the schema version, theorem or any field
                is wrong.
        """
        version = payload.get("schema_version")
        if version != SCHEMA_VERSION:
            msg = f"Unsupported schema version {version!r}."
            raise ScenarioFormatError(msg)
        theorem = payload.get("theorem")
        if theorem not in THEOREMS:
            msg = f"Unknown theorem {theorem!r}."
            raise ScenarioFormatError(msg)
        try:
            seed = int(payload["seed"])
            parameters = Parameters.from_json(dict(payload["parameters"]))
            data = dict(payload["payload"])
        except (KeyError, TypeError, ValueError) as err:
            msg = f"Malformed scenario: {err}."
            raise ScenarioFormatError(msg) from err
        return cls(seed, theorem, parameters, data, version)

    @classmethod
    def loads(cls, text: str) -> Scenario:
        """Parse scenario JSON text.

        Raises:
            ScenarioFormatError: If the text is not valid JSON.
        """
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as err:
            msg = f"Scenario is not valid JSON: {err}."
            raise ScenarioFormatError(msg) from err
        if not isinstance(payload, dict):
            msg = "Scenario root must be an object."
            raise ScenarioFormatError(msg)
        return cls.from_json(payload)

    def save(self, path: Path) -> None:
        """Write the canonical JSON text to `path`."""
        path.write_text(self.dumps() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> Scenario:
        """Read a scenario file.

        Raises:
            ScenarioFormatError: If the file is missing or malformed.
        """
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as err:
            msg = f"Cannot read scenario {path}: {err}."
            raise ScenarioFormatError(msg) from err
        return cls.loads(text)
