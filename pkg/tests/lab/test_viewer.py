import pytest
from textual.widgets import DataTable
from textual.widgets import TabbedContent

from toeplitz_lab.lab import LedgerViewer
from toeplitz_lab.lab import RecordScreen


@pytest.fixture
def viewer(make_record):
    return LedgerViewer(
        [
            make_record(seed=1),
            make_record("fail", seed=2, isometry=1e-3),
            make_record("invalid-instance", theorem="thm45", seed=3),
        ],
        title="ledger.jsonl",
    )


@pytest.mark.unit
async def test_tables(viewer):
    async with viewer.run_test():
        assert viewer.sub_title == "ledger.jsonl"
        assert viewer.query_one("#table-all", DataTable).row_count == 3
        assert viewer.query_one("#table-thm32", DataTable).row_count == 2
        assert viewer.query_one("#table-thm45", DataTable).row_count == 1
        assert viewer.query_one(TabbedContent).active == "all"


@pytest.mark.unit
async def test_failure_column(viewer):
    async with viewer.run_test():
        table = viewer.query_one("#table-all", DataTable)

        assert table.get_row("1")[3] == "terminated, isometry"


@pytest.mark.unit
async def test_record_dialog(viewer):
    async with viewer.run_test() as pilot:
        viewer.query_one("#table-all", DataTable).focus()

        await pilot.press("down", "enter")
        assert isinstance(viewer.screen, RecordScreen)

        await pilot.press("escape")
        assert not isinstance(viewer.screen, RecordScreen)


@pytest.mark.unit
async def test_switch_tab(viewer):
    async with viewer.run_test() as pilot:
        viewer.query_one(TabbedContent).active = "thm45"
        await pilot.pause()

        assert viewer.query_one(TabbedContent).active == "thm45"


@pytest.mark.unit
async def test_record_dialog_checks(viewer):
    async with viewer.run_test() as pilot:
        viewer.query_one("#table-all", DataTable).focus()

        await pilot.press("down", "enter")
        await pilot.pause()
        screen = viewer.screen
        assert isinstance(screen, RecordScreen)
        assert screen.record.scenario_id == "thm32-2"

        table = screen.query_one("#checks", DataTable)
        assert table.row_count == 2
        assert table.get_row("isometry")[:2] == ["isometry", "1.00e-03"]
        assert str(table.get_row("isometry")[2]) == "FAIL"
        assert str(table.get_row("flag:terminated")[2]) == "FAIL"
