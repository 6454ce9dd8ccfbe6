# mergmkit/export/json_exporter.py
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel

from ..core.models import ReportTable


class JSONExporter:
    """Exports results to JSON format."""

    extension = "json"

    def __init__(self, output_dir: Union[str, Path] = "./mergm_output"):
        """
        Initialize the exporter.

        Args:
            output_dir: Directory to write output files
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export(self, data: Union[BaseModel, Dict[str, Any]], filename: Optional[str] = None) -> Path:
        """
        Export a model or a plain dict to JSON.

        Args:
            data: Pydantic model (report table, fit, summary...) or dict
            filename: File name; report tables default to ``<name>.json``

        Returns:
            Path to the generated file
        """
        if filename is None:
            if not isinstance(data, ReportTable):
                raise ValueError("A filename is required unless exporting a ReportTable")
            filename = f"{data.name}.{self.extension}"
        file_path = self.output_dir / filename

        # Convert Pydantic models to dict
        payload = data.model_dump(mode="json", by_alias=True) if isinstance(data, BaseModel) else data

        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")

        return file_path
