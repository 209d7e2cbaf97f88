import threading

from pydantic import BaseModel
from rich.console import Console
from rich.live import Live
from rich.style import Style
from rich.table import Table
from rich.text import Text

console = Console(stderr=True)

DONE_STATES = ("done", "pass")
FAILED_STATES = ("error", "fail")


class CheckStatus(BaseModel):
    status: str = ""
    level: str | None = None

    def style(self) -> tuple[str, Style]:
        state = self.status.lower()
        if state in DONE_STATES:
            return "✓", Style(color="green", bold=True)
        if state in FAILED_STATES:
            return "✗", Style(color="red", bold=True)
        return "⋯", Style(color="yellow")


class CheckProgress:
    """Live status lines for the checks of a run; safe to update from sweep worker threads."""

    def __init__(self):
        self.checks: dict[str, CheckStatus] = {}
        self.lock = threading.Lock()
        self.live = Live(self.render(), console=console, refresh_per_second=4)
        self.started = False

    def start(self):
        if not self.started:
            self.live.start()
            self.started = True

    def stop(self):
        if self.started:
            self.live.stop()
            self.started = False

    def update_status(self, check_name: str, level: str | None = None, status: str = ""):
        """Set the status of a check, optionally naming the sweep point it is working on."""
        with self.lock:
            entry = self.checks.setdefault(check_name, CheckStatus())
            if level:
                entry.level = level
            if status:
                entry.status = status
            self.live.update(self.render())

    def render(self) -> Table:
        table = Table(show_header=False, box=None, padding=(0, 1))
        table.add_column(width=100)
        for check_name, entry in self.checks.items():
            symbol, style = entry.style()
            line = Text()
            line.append(f"{symbol} ", style=style)
            line.append(f"{check_name.replace('-', ' ').title():<20}", style=Style(bold=True))
            if entry.level:
                line.append(f"[{entry.level}] ", style=Style(color="cyan"))
            line.append(entry.status, style=style)
            table.add_row(line)
        return table


progress = CheckProgress()
