# mergmkit/export/text_exporter.py
import io
from pathlib import Path
from typing import Any, Optional, Union

from rich.console import Console
from rich.table import Table

from ..core.models import ReportTable


def format_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e12:
            return f"{value:.0f}"
        return f"{value:.4f}"
    return str(value)


def render_table(table: ReportTable) -> Table:
    """Rich table with right-aligned numeric columns."""
    view = Table(title=table.title, show_header=True, header_style="bold", show_lines=False)
    for k, column in enumerate(table.columns):
        numeric = any(isinstance(row[k], (int, float)) and not isinstance(row[k], bool) for row in table.rows)
        view.add_column(column or " ", justify="right" if numeric else "left")
    for row in table.rows:
        view.add_row(*[format_cell(v) for v in row])
    if table.notes:
        view.caption = "\n".join(table.notes)
    return view


class TextExporter:
    """Writes report tables as aligned plain text."""

    extension = "txt"

    def __init__(self, output_dir: Union[str, Path] = "./mergm_output", width: int = 160):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.width = width

    def render(self, table: ReportTable) -> str:
        buffer = io.StringIO()
        console = Console(file=buffer, width=self.width, color_system=None, force_terminal=False)
        console.print(render_table(table))
        return buffer.getvalue()

    def export(self, table: ReportTable, filename: Optional[str] = None) -> Path:
        file_path = self.output_dir / (filename or f"{table.name}.{self.extension}")
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(self.render(table))
        return file_path
