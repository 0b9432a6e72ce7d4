"""Aggregation of ledger records into per-theorem summaries."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from dataclasses import field
from statistics import fmean
from typing import TYPE_CHECKING
from typing import Any

from rich.table import Table

if TYPE_CHECKING:
    from collections.abc import Sequence

    from ._runner import Record


@dataclass
class Summary:
    """Counts and extremes over the records of one theorem.

    Params:
        theorem: Theorem the records belong to.
        total: Number of records.
        passed: Records with status `pass`.
        failed: Records with status `fail`.
        invalid: Records with status `invalid-instance`.
        max_residuals: Largest value seen for each check name.
        mean_seconds: Mean elapsed time.
        max_seconds: Largest elapsed time.
        failing: Scenario identifiers that failed.
    """

    theorem: str
    total: int = 0
    passed: int = 0
    failed: int = 0
    invalid: int = 0
    max_residuals: dict[str, float] = field(default_factory=dict)
    mean_seconds: float = 0.0
    max_seconds: float = 0.0
    failing: list[str] = field(default_factory=list)

    @property
    def pass_rate(self) -> float:
        """Share of passing records among the valid ones."""
        valid = self.total - self.invalid
        return self.passed / valid if valid else 0.0

    @property
    def worst(self) -> float:
        """Largest residual over every check."""
        return max(self.max_residuals.values(), default=0.0)

    def to_json(self) -> dict[str, Any]:
        """Serializable form with residual names sorted."""
        return {
            "theorem": self.theorem,
            "total": self.total,
            "passed": self.passed,
            "failed": self.failed,
            "invalid": self.invalid,
            "pass_rate": self.pass_rate,
            "max_residuals": dict(sorted(self.max_residuals.items())),
            "mean_seconds": self.mean_seconds,
            "max_seconds": self.max_seconds,
            "failing": list(self.failing),
        }


def summarize(records: Sequence[Record]) -> list[Summary]:
    """One summary per theorem, in order of first appearance.

    An empty ledger gives a single zero-count summary under `all`.
    """
    if not records:
        return [Summary("all")]

    grouped: dict[str, list[Record]] = defaultdict(list)
    for record in records:
        grouped[record.theorem].append(record)

    summaries: list[Summary] = []
    for theorem, group in grouped.items():
        summary = Summary(theorem, total=len(group))
        for record in group:
            if record.status == "pass":
                summary.passed += 1
            elif record.status == "fail":
                summary.failed += 1
                summary.failing.append(record.scenario_id)
            else:
                summary.invalid += 1
            for name, value in record.checks.items():
                previous = summary.max_residuals.get(name, 0.0)
                summary.max_residuals[name] = max(previous, value)

        seconds = [r.elapsed_seconds for r in group]
        summary.mean_seconds = fmean(seconds)
        summary.max_seconds = max(seconds)
        summaries.append(summary)
    return summaries


def summary_table(summaries: Sequence[Summary]) -> Table:
    """Rich table with one row per theorem."""
    table = Table(title="Verification summary")
    table.add_column("Theorem", style="bold")
    table.add_column("Runs", justify="right")
    table.add_column("Pass", justify="right", style="green")
    table.add_column("Fail", justify="right", style="red")
    table.add_column("Invalid", justify="right", style="yellow")
    table.add_column("Pass rate", justify="right")
    table.add_column("Max residual", justify="right")
    table.add_column("Mean s", justify="right")
    table.add_column("Max s", justify="right")
    table.add_column("Failing")

    for s in summaries:
        table.add_row(
            s.theorem,
            str(s.total),
            str(s.passed),
            str(s.failed),
            str(s.invalid),
            f"{s.pass_rate:.1%}",
            f"{s.worst:.2e}",
            f"{s.mean_seconds:.3f}",
            f"{s.max_seconds:.3f}",
            ", ".join(s.failing),
        )
    return table


def summary_lines(summaries: Sequence[Summary]) -> list[str]:
    """One JSON object per theorem, keys sorted."""
    return [json.dumps(s.to_json(), sort_keys=True) for s in summaries]
