"""Terminal browser for verification ledgers."""

from __future__ import annotations

from collections import defaultdict
from typing import TYPE_CHECKING
from typing import ClassVar

from rich.pretty import Pretty
from rich.text import Text
from textual import on
from textual.app import App
from textual.app import ComposeResult
from textual.containers import ScrollableContainer
from textual.containers import Vertical
from textual.screen import ModalScreen
from textual.widgets import Button
from textual.widgets import DataTable
from textual.widgets import Footer
from textual.widgets import Header
from textual.widgets import Static
from textual.widgets import TabbedContent
from textual.widgets import TabPane

from toeplitz_lab.__about__ import __version__

if TYPE_CHECKING:
    from collections.abc import Sequence

    from textual.events import Mount

    from ._runner import Record

STATUS_STYLES: dict[str, str] = {
    "pass": "green",
    "fail": "bold red",
    "invalid-instance": "yellow",
}


class RecordScreen(ModalScreen[None]):
    """Modal breaking a single record down into its checks and details.

    Residuals and flags share one table, each row marked against the
    tolerance the record was run with.
    """

    BINDINGS: ClassVar = [
        ("escape", "dismiss", "Close Record"),
    ]

    def __init__(self, record: Record, *, id: str | None = None) -> None:
        super().__init__(id=id)
        self.record = record

    def _headline(self) -> Text:
        record = self.record
        return Text.assemble(
            (record.scenario_id, "bold"),
            "  ",
            (record.status, STATUS_STYLES[record.status]),
            f"  seed {record.seed}  tol {record.tolerance:.0e}",
            f"  {record.elapsed_seconds:.3f}s",
        )

    def compose(self) -> ComposeResult:
        """Headline, checks table and the informational details."""
        with Vertical(id="record-panel"):
            yield Static(self._headline(), id="headline")
            yield DataTable(
                id="checks", cursor_type="none", zebra_stripes=True
            )
            if self.record.error:
                yield Static(Text(self.record.error, "yellow"), id="error")
            with ScrollableContainer(id="details"):
                yield Static(Pretty(self.record.details))
            yield Button(
                r"Close\[esc]", "warning", action="screen.dismiss"
            )

    def _on_mount(self, event: Mount) -> None:
        table: DataTable[Text | str] = self.query_one("#checks", DataTable)
        table.add_columns("Check", "Value", "Verdict")
        tol = self.record.tolerance
        for name, residual in sorted(self.record.checks.items()):
            ok = residual <= tol
            table.add_row(
                name, f"{residual:.2e}", _verdict(ok=ok), key=name
            )
        for name, flag in sorted(self.record.flags.items()):
            table.add_row(
                name, str(flag), _verdict(ok=flag), key=f"flag:{name}"
            )


def _verdict(*, ok: bool) -> Text:
    return Text("ok", "green") if ok else Text("FAIL", "bold red")


class RecordTable(DataTable[Text | str]):
    """Records of one theorem, one row per run."""

    COLUMNS: ClassVar[tuple[str, ...]] = (
        "Scenario",
        "Status",
        "Max residual",
        "Failures",
        "Seconds",
    )

    def __init__(
        self,
        records: Sequence[tuple[int, Record]],
        *,
        id: str | None = None,
    ) -> None:
        super().__init__(id=id, cursor_type="row", zebra_stripes=True)
        self._records = records

    def _on_mount(self, event: Mount) -> None:
        self.add_columns(*self.COLUMNS)
        for index, record in self._records:
            failures = [k for k, v in record.flags.items() if not v]
            failures += [
                k
                for k, v in record.checks.items()
                if not v <= record.tolerance
            ]
            self.add_row(
                record.scenario_id,
                Text(record.status, style=STATUS_STYLES[record.status]),
                f"{record.max_residual:.2e}",
                ", ".join(failures) or record.error or "",
                f"{record.elapsed_seconds:.3f}",
                key=str(index),
            )


class LedgerViewer(App[None]):
    """Browse ledger records grouped by theorem.

    Selecting a row opens the full record in a modal screen.
    """

    CSS: ClassVar[str] = """
    Screen {
        align: center middle;

        TabbedContent {
            padding: 1 0;
            height: 1fr;
        }
    }

    RecordScreen {
        align: center middle;

        #record-panel {
            border: round $primary;
            width: 80%;
            height: 90%;
            padding: 0 1;

            #checks {
                height: auto;
                max-height: 50%;
                margin: 1 0;
            }

            #details {
                height: 1fr;
            }

            Button {
                border: none;
                height: 1;
                width: 100%;
            }
        }
    }
    """

    BINDINGS: ClassVar = [("q", "quit", "Quit")]

    TITLE = "Toeplitz Lab"
    SUB_TITLE = __version__

    def __init__(self, records: Sequence[Record], title: str = "") -> None:
        super().__init__()
        self.records = list(records)
        if title:
            self.sub_title = title

    def compose(self) -> ComposeResult:
        """Generate one tab for all records and one per theorem."""
        yield Header()

        indexed = list(enumerate(self.records))
        grouped: dict[str, list[tuple[int, Record]]] = defaultdict(list)
        for index, record in indexed:
            grouped[record.theorem].append((index, record))

        with TabbedContent(initial="all"):
            with TabPane(f"All ({len(indexed)})", id="all"):
                yield RecordTable(indexed, id="table-all")
            for theorem, group in grouped.items():
                with TabPane(f"{theorem} ({len(group)})", id=theorem):
                    yield RecordTable(group, id=f"table-{theorem}")

        yield Footer()

    @on(DataTable.RowSelected)
    def _open_record(self, message: DataTable.RowSelected) -> None:
        message.stop()
        record = self.records[int(str(message.row_key.value))]
        self.log.debug("Opening record", scenario=record.scenario_id)
        self.push_screen(RecordScreen(record))
