from __future__ import annotations

import pytest
from whenever import Instant
from whenever import patch_current_time

from toeplitz_lab.lab import Ledger
from toeplitz_lab.lab import Parameters
from toeplitz_lab.lab import Record


@pytest.fixture
def freeze_time():
    time = Instant.from_utc(2025, 2, 6)

    with patch_current_time(time, keep_ticking=False):
        yield time


@pytest.fixture
def small():
    """Parameters small enough for quick unit runs."""
    return Parameters(blocks=4, taylor_degree=80)


@pytest.fixture
def ledger(tmp_path):
    return Ledger(tmp_path / "ledger.jsonl")


@pytest.fixture
def make_record():
    def build(status="pass", theorem="thm32", seed=0, **checks):
        return Record(
            f"{theorem}-{seed}",
            seed,
            theorem,
            status,
            1e-8,
            checks or {"reconstruction": 1e-14},
            {"terminated": status != "fail"},
            elapsed_seconds=0.5,
        )

    return build
