# mergmkit/export/__init__.py
"""Writers for report tables and result documents."""

from pathlib import Path
from typing import Any, Dict, List, Optional, Type

from typing_extensions import Protocol, runtime_checkable

from .csv_exporter import CSVExporter
from .json_exporter import JSONExporter
from .text_exporter import TextExporter


@runtime_checkable
class Exporter(Protocol):
    """Anything that writes one artifact into its output directory."""

    extension: str
    output_dir: Path

    def export(self, data: Any, filename: Optional[str] = None) -> Path:
        ...


_EXPORTERS: Dict[str, Type[Exporter]] = {
    "csv": CSVExporter,
    "text": TextExporter,
    "json": JSONExporter,
}


def register_exporter(format_name: str, exporter_class: Type[Exporter]) -> None:
    """Make ``exporter_class`` available under ``format_name``."""
    _EXPORTERS[format_name.lower()] = exporter_class


def get_exporter(format_name: str, **kwargs: Any) -> Exporter:
    """
    Instantiate the exporter registered for ``format_name``; keyword
    arguments (usually ``output_dir``) go to its constructor.

    Raises:
        ValueError: no exporter is registered under that name
    """
    exporter_class = _EXPORTERS.get(format_name.lower())
    if exporter_class is None:
        raise ValueError(f"Export format '{format_name}' not supported. Available formats: {', '.join(list_formats())}")
    return exporter_class(**kwargs)


def list_formats() -> List[str]:
    return list(_EXPORTERS)


__all__ = ["CSVExporter", "Exporter", "JSONExporter", "TextExporter", "get_exporter", "list_formats", "register_exporter"]
