"""Scenario execution, ledger records and the suite thread pool."""

from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from typing import TYPE_CHECKING
from typing import Any

import numpy as np
from whenever import Instant

from toeplitz_lab._blaschke import BlaschkeProduct
from toeplitz_lab._exceptions import HypothesisError
from toeplitz_lab._exceptions import NotInvariantError
from toeplitz_lab._exceptions import ScenarioFormatError
from toeplitz_lab._hardy import WoldFrame
from toeplitz_lab._hardy import WoldVector
from toeplitz_lab._linspace import Subspace
from toeplitz_lab._linspace import principal_angles
from toeplitz_lab._toeplitz import c0_decay
from toeplitz_lab._toeplitz import settling_step
from toeplitz_lab._toeplitz import toeplitz_adjoint
from toeplitz_lab._toeplitz import toeplitz_forward
from toeplitz_lab.constants import SCHEMA_VERSION
from toeplitz_lab.constants import VERIFICATION_TOL
from toeplitz_lab.structure import CheckReport
from toeplitz_lab.structure import almost_converse_thm310
from toeplitz_lab.structure import almost_decompose_thm310
from toeplitz_lab.structure import almost_equiv_check
from toeplitz_lab.structure import check_thm36_converse
from toeplitz_lab.structure import check_thm37_converse
from toeplitz_lab.structure import decompose_thm32
from toeplitz_lab.structure import forward_thm37
from toeplitz_lab.structure import membership_via_model
from toeplitz_lab.structure import nearly_decompose_thm313
from toeplitz_lab.structure import nearly_defect_converse
from toeplitz_lab.structure import nearly_defect_decompose
from toeplitz_lab.structure import rebuild_from_model
from toeplitz_lab.structure import verify_canonical_conditions
from toeplitz_lab.structure import wandering_bound_lemma39

from ._generators import generate
from ._scenario import THEOREMS
from ._scenario import Parameters
from ._scenario import Scenario
from ._scenario import unpack_vectors

if TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Sequence
    from pathlib import Path

    from toeplitz_lab._types import RecordStatus

    from ._scenario import TheoremId

log = logging.getLogger(__name__)

ANGLE_TOL = 1e-6
"""Largest principal angle accepted between rebuilt and original subspaces."""

DECAY_LEVEL = 1e-10
"""Relative norm the decay profile has to reach."""


@dataclass(frozen=True)
class Record:
    """Ledger entry of one scenario run.

    Everything except `recorded_at` and `elapsed_seconds` is a function of
    the scenario and the tolerance.

    Params:
        scenario_id: Identifier of the scenario.
        seed: Seed of the scenario.
        theorem: Theorem of the scenario.
        status: `pass`, `fail` or `invalid-instance`.
        tolerance: Acceptance level the run used.
        checks: Named residuals.
        flags: Named boolean conditions.
        details: Informational values.
        error: Message of the hypothesis error of an invalid instance.
        recorded_at: ISO instant at which the run started.
        elapsed_seconds: Wall time of the run.
    """

    scenario_id: str
    seed: int
    theorem: TheoremId
    status: RecordStatus
    tolerance: float
    checks: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    error: str | None = None
    recorded_at: str = ""
    elapsed_seconds: float = 0.0

    def result(self) -> dict[str, Any]:
        """The deterministic part of the record."""
        return {
            "status": self.status,
            "tolerance": self.tolerance,
            "checks": dict(self.checks),
            "flags": dict(self.flags),
            "details": dict(self.details),
            "error": self.error,
        }

    @property
    def max_residual(self) -> float:
        """Largest check residual, zero without checks."""
        return max(self.checks.values(), default=0.0)

    def to_json(self) -> dict[str, Any]:
        """Ledger line content."""
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario_id": self.scenario_id,
            "seed": self.seed,
            "theorem": self.theorem,
            "result": self.result(),
            "recorded_at": self.recorded_at,
            "elapsed_seconds": self.elapsed_seconds,
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> Record:
        """Inverse of [to_json][toeplitz_lab.lab.Record.to_json].

        Raises:
            ScenarioFormatError: On a wrong schema version or missing fields.
        """
        if payload.get("schema_version") != SCHEMA_VERSION:
            msg = f"Unsupported ledger schema {payload.get('schema_version')}."
            raise ScenarioFormatError(msg)
        try:
            result = payload["result"]
            return cls(
                payload["scenario_id"],
                int(payload["seed"]),
                payload["theorem"],
                result["status"],
                float(result["tolerance"]),
                dict(result["checks"]),
                dict(result["flags"]),
                dict(result["details"]),
                result.get("error"),
                payload.get("recorded_at", ""),
                float(payload.get("elapsed_seconds", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as err:
            msg = f"Malformed ledger record: {err}."
            raise ScenarioFormatError(msg) from err


class Ledger:
    """Append-only JSON lines file of records.

    Appends are serialized by a lock so one ledger can be shared by the
    workers of a suite.
    """

    def __init__(self, path: Path) -> None:
        self.path = path
        self._lock = threading.Lock()

    def append(self, record: Record) -> None:
        """Write one record as a single line."""
        line = json.dumps(record.to_json(), sort_keys=True)
        with self._lock, self.path.open("a", encoding="utf-8") as handle:
            handle.write(line + "\n")

    def records(self) -> list[Record]:
        """Every record in file order.

        Raises:
            ScenarioFormatError: If the file is missing or a line is invalid.
        """
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as err:
            msg = f"Cannot read ledger {self.path}: {err}."
            raise ScenarioFormatError(msg) from err

        records: list[Record] = []
        for number, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as err:
                msg = f"Ledger line {number} is not valid JSON: {err}."
                raise ScenarioFormatError(msg) from err
            records.append(Record.from_json(payload))
        return records


class _Payload:
    """Typed access to a scenario payload."""

    def __init__(self, scenario: Scenario) -> None:
        self._data = scenario.payload
        self.frame = WoldFrame.from_descriptor(self._get("frame"))

    def _get(self, key: str) -> Any:
        try:
            return self._data[key]
        except KeyError as err:
            msg = f"Scenario payload misses {key!r}."
            raise ScenarioFormatError(msg) from err

    def subspace(self, key: str) -> Subspace:
        return Subspace.from_json(self._get(key))

    def vectors(self, key: str) -> list[WoldVector]:
        return unpack_vectors(self.frame, self._get(key))

    def vector(self, key: str) -> WoldVector:
        return unpack_vectors(self.frame, [self._get(key)])[0]

    def product(self, key: str) -> BlaschkeProduct:
        return BlaschkeProduct.from_json(self._get(key))

    def text(self, key: str) -> str:
        return str(self._get(key))


def _prefixed(prefix: str, values: dict[str, Any]) -> dict[str, Any]:
    return {f"{prefix}_{k}": v for k, v in values.items()}


def _run_thm32(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    M = data.subspace("M")
    result = decompose_thm32(M, data.vectors("Us"), data.vectors("Vs"), tol)
    canonical = verify_canonical_conditions(result, M, tol)
    return CheckReport(
        scenario.theorem,
        result.checks | _prefixed("canonical", canonical.checks),
        tol,
        flags=canonical.flags
        | {"terminated": result.checks["termination"] <= VERIFICATION_TOL},
        details={"p": result.p, "dim_M": M.dim, "steps": result.steps},
    )


def _run_thm36(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    G, K, M = data.vectors("G"), data.subspace("K"), data.subspace("M")
    residual = check_thm36_converse(G, K, M, tol)

    shifted = [WoldVector(frame, frame.shift_back(g.coords)) for g in G]
    result = decompose_thm32(M, G, shifted, tol)
    round_trip = check_thm36_converse(result.G, result.K, M, tol)
    return CheckReport(
        scenario.theorem,
        {"converse": residual, "round_trip": round_trip}
        | _prefixed("decomposition", result.checks),
        tol,
        flags={"p_recovered": result.p == len(G)},
        details={"p": len(G), "dim_M": M.dim},
    )


def _run_thm37(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    M = data.subspace("M")
    result = forward_thm37(
        M,
        data.vectors("Us"),
        data.vectors("Vs"),
        tol,
        scenario.parameters.guard,
    )
    samples = data.vectors("samples")
    agreement = sum(
        membership_via_model(F, result.G, result.Nspace, tol)
        == M.contains(F, tol)
        for F in samples
    )
    converse = check_thm37_converse(result.G, result.Nspace, M, tol)
    return CheckReport(
        scenario.theorem,
        result.checks
        | {"unitary": result.unitary_residual, "converse": converse},
        tol,
        flags={"membership": agreement == len(samples)},
        details={"p": result.p, "dim_M": M.dim, "agreement": agreement},
    )


def _run_thm310(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    M = data.subspace("M")
    pairs = list(zip(data.vectors("Vs"), data.vectors("Us")))
    equivalence = almost_equiv_check(toeplitz_adjoint(frame), M, pairs, tol)
    result = almost_decompose_thm310(M, tol=tol)
    canonical = verify_canonical_conditions(result, M, tol)
    converse = almost_converse_thm310(result.G, result.K, M, tol)
    defect = result.defect.defect if result.defect else 0
    return CheckReport(
        scenario.theorem,
        result.checks
        | _prefixed("lemma", equivalence.checks)
        | _prefixed("canonical", canonical.checks)
        | _prefixed("converse", converse.checks),
        tol,
        flags=_prefixed("lemma", equivalence.flags)
        | canonical.flags
        | converse.flags
        | {"p_bounded": result.p <= defect},
        details={"p": result.p, "defect": defect, "dim_M": M.dim},
    )


def _run_lemma36(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    M = data.subspace("M")
    pairs = list(zip(data.vectors("Vs"), data.vectors("Us")))
    report = almost_equiv_check(toeplitz_adjoint(data.frame), M, pairs, tol)
    return CheckReport(
        scenario.theorem,
        report.checks,
        tol,
        report.flags,
        report.details | {"dim_M": M.dim},
    )


def _run_lemma39(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    bound = wandering_bound_lemma39(data.subspace("M"), data.product("Bp"))
    return CheckReport(
        scenario.theorem,
        {},
        tol,
        flags={"bound": bound.holds},
        details={"dim": bound.dim, "bound": bound.bound},
    )


def _same_subspace(S1: Subspace, S2: Subspace) -> tuple[bool, float]:
    if S1.dim != S2.dim:
        return False, float("inf")
    angles = principal_angles(S1, S2)
    largest = float(np.max(angles, initial=0.0))
    return largest <= ANGLE_TOL, largest


def _run_thm313(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    M, Bp = data.subspace("M"), data.product("Bp")
    result = nearly_decompose_thm313(M, frame.blaschke, Bp, tol)
    rebuilt = rebuild_from_model(result.G, result.Nsub, frame, tol)
    same, angle = _same_subspace(rebuilt, M)
    flags = {"rebuild": same}
    if Bp == frame.blaschke:
        flags["p_recovered"] = result.p == len(data.vectors("G"))
    return CheckReport(
        scenario.theorem,
        result.checks | {"unitary": result.unitary_residual},
        tol,
        flags=flags,
        details={"p": result.p, "dim_M": M.dim, "rebuild_angle": angle},
    )


def _run_defect(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    M, Bp = data.subspace("M"), data.product("Bp")
    n = len(data.vectors("Js"))
    result = nearly_defect_decompose(M, frame.blaschke, Bp, tol)
    converse = nearly_defect_converse(
        result.G, result.K, result.Js, frame.blaschke, Bp, tol, frame=frame
    )
    flags = converse.flags | {"defect_bounded": result.n <= n}
    if Bp == frame.blaschke:
        flags["case"] = result.case == data.text("case")
    return CheckReport(
        scenario.theorem,
        result.checks | _prefixed("converse", converse.checks),
        tol,
        flags=flags,
        details={
            "case": result.case,
            "p": result.p,
            "n": result.n,
            "dim_M": M.dim,
        },
    )


def _run_thm44(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    report = nearly_defect_converse(
        data.vectors("G"),
        data.subspace("K"),
        data.vectors("Js"),
        frame.blaschke,
        data.product("Bp"),
        tol,
        frame=frame,
    )
    return CheckReport(
        scenario.theorem, report.checks, tol, report.flags, report.details
    )


def _run_c0decay(scenario: Scenario, tol: float) -> CheckReport:
    data = _Payload(scenario)
    frame = data.frame
    h = data.vector("h")
    norms = c0_decay(
        toeplitz_forward(frame), data.subspace("M"), h, frame.blocks
    )
    step = settling_step(norms, DECAY_LEVEL * h.norm())
    return CheckReport(
        scenario.theorem,
        {"final_norm": norms[-1]},
        tol,
        flags={"settled": step is not None and step <= frame.blocks},
        details={"step": step, "profile": norms},
    )


RUNNERS: dict[TheoremId, Callable[[Scenario, float], CheckReport]] = {
    "thm32": _run_thm32,
    "thm36": _run_thm36,
    "thm37": _run_thm37,
    "thm310": _run_thm310,
    "lemma36": _run_lemma36,
    "lemma39": _run_lemma39,
    "thm313": _run_thm313,
    "thm42": _run_defect,
    "thm44": _run_thm44,
    "thm45": _run_defect,
    "c0decay": _run_c0decay,
}


def run(scenario: Scenario, tol: float | None = None) -> Record:
    """Run a scenario and build its ledger record.

    Hypothesis and invariance precondition failures become
    `invalid-instance` records; every other error propagates.

    Args:
        scenario: The scenario to replay.
        tol: Acceptance level, the scenario's own when omitted.

    Raises:
        ScenarioFormatError: If the payload cannot be decoded.
        LabError: On invalid input to the algorithms.

    Returns:
        The record, status `pass` only when every check and flag passes.
    """
    tol = scenario.parameters.tolerance if tol is None else tol
    start = Instant.now()
    error: str | None = None
    status: RecordStatus
    try:
        report = RUNNERS[scenario.theorem](scenario, tol)
    except (HypothesisError, NotInvariantError) as err:
        log.debug("Scenario %s is invalid: %s", scenario.scenario_id, err)
        status, error = "invalid-instance", str(err)
        report = CheckReport(scenario.theorem, {}, tol)
    else:
        status = "pass" if report.passed else "fail"

    elapsed = (Instant.now() - start).in_seconds()
    return Record(
        scenario.scenario_id,
        scenario.seed,
        scenario.theorem,
        status,
        tol,
        report.checks,
        report.flags,
        report.details,
        error,
        start.format_iso(),
        elapsed,
    )


def suite(
    theorem: TheoremId,
    trials: int,
    seed: int,
    params: Parameters | None = None,
    *,
    tol: float | None = None,
    workers: int = 1,
    ledger: Ledger | None = None,
) -> list[Record]:
    """Generate and run `trials` scenarios with seeds `seed, seed + 1, …`.

    Args:
        theorem: Theorem of every scenario.
        trials: Number of scenarios.
        seed: First seed.
        params: Shared parameters.
        tol: Acceptance level override.
        workers: Size of the thread pool.
        ledger: Sink receiving one record per scenario.

    Returns:
        The records in seed order.
    """
    if theorem not in THEOREMS:
        msg = f"Unknown theorem {theorem!r}."
        raise ScenarioFormatError(msg)

    def task(offset: int) -> Record:
        record = run(generate(seed + offset, theorem, params), tol)
        if ledger is not None:
            ledger.append(record)
        return record

    with ThreadPoolExecutor(max_workers=max(workers, 1)) as pool:
        records = list(pool.map(task, range(trials)))
    log.debug("Suite %s ran %d scenarios.", theorem, len(records))
    return records


def exit_status(records: Sequence[Record]) -> int:
    """`1` on any failure, else `2` on any invalid instance, else `0`."""
    statuses = {r.status for r in records}
    if "fail" in statuses:
        return 1
    if "invalid-instance" in statuses:
        return 2
    return 0
