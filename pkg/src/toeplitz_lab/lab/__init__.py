"""Seeded scenario generation, replay and ledgers for the structure theorems.

Examples:
    >>> from toeplitz_lab.lab import generate, run
    >>> record = run(generate(1, "thm32"))
    >>> record.status
    'pass'
"""

from __future__ import annotations

from ._generators import GENERATORS
from ._generators import check_caps
from ._generators import generate
from ._generators import make_rng
from ._report import Summary
from ._report import summarize
from ._report import summary_lines
from ._report import summary_table
from ._runner import RUNNERS
from ._runner import Ledger
from ._runner import Record
from ._runner import exit_status
from ._runner import run
from ._runner import suite
from ._scenario import THEOREMS
from ._scenario import Parameters
from ._scenario import Scenario
from ._scenario import TheoremId
from ._scenario import pack_vectors
from ._scenario import unpack_vectors
from ._viewer import LedgerViewer
from ._viewer import RecordScreen

__all__ = (
    "GENERATORS",
    "RUNNERS",
    "THEOREMS",
    "Ledger",
    "LedgerViewer",
    "Parameters",
    "Record",
    "RecordScreen",
    "Scenario",
    "Summary",
    "TheoremId",
    "check_caps",
    "exit_status",
    "generate",
    "make_rng",
    "pack_vectors",
    "run",
    "suite",
    "summarize",
    "summary_lines",
    "summary_table",
    "unpack_vectors",
)
