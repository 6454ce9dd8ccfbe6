# mergmkit/export/csv_exporter.py
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from ..core.models import ReportTable


class CSVExporter:
    """Writes report tables as CSV."""

    extension = "csv"

    def __init__(self, output_dir: Union[str, Path] = "./mergm_output"):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export(self, table: ReportTable, filename: Optional[str] = None) -> Path:
        """
        Export a table to ``<output_dir>/<table.name>.csv``.

        Floats are written with full precision so that identical runs give
        byte-identical files.
        """
        file_path = self.output_dir / (filename or f"{table.name}.{self.extension}")
        frame = pd.DataFrame(table.rows, columns=table.columns)
        frame.to_csv(file_path, index=False, float_format="%.10g", lineterminator="\n")
        return file_path
