# mergmkit/core/config.py
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from .errors import ConfigError
from .models import ChainConfig, DescriptiveOptions, EstimationSettings, ModelSpec, StatDescriptor

OUTPUT_DIR_ENV = "MERGMKIT_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "./mergm_output"


def default_output_dir() -> str:
    """Output directory from the environment (a .env file is honoured), else the default."""
    load_dotenv()
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        raise ConfigError(f"Cannot read JSON from {path}: {e}", path=str(path)) from e


class Config:
    """
    Run document for mergmkit.

    A single JSON file may carry the sections ``model``, ``chain``,
    ``estimation``, ``gof`` and ``descriptives``; each is validated on access.
    """

    SECTIONS = ("model", "chain", "estimation", "gof", "descriptives")

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """
        Initialize the configuration.

        Args:
            config_path: Path to a JSON run document. If None, all sections use defaults.
        """
        self.config_path = Path(config_path) if config_path is not None else None
        self._config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        if self.config_path is None:
            return {}
        data = read_json(self.config_path)
        if not isinstance(data, dict):
            raise ConfigError(f"{self.config_path}: run document must be a JSON object", path=str(self.config_path))
        unknown = [k for k in data if k not in self.SECTIONS]
        if unknown:
            raise ConfigError(
                f"{self.config_path}: unknown section(s) {', '.join(unknown)}; expected {', '.join(self.SECTIONS)}",
                path=str(self.config_path),
            )
        return data

    def save(self, path: Optional[Union[str, Path]] = None) -> Path:
        """Write the document to ``path`` (default: where it was read from)."""
        target = Path(path) if path is not None else self.config_path
        if target is None:
            raise ConfigError("No path to save the configuration to")
        with open(target, "w", encoding="utf-8") as f:
            json.dump(self._config, f, indent=2)
        return target

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get a configuration value.

        Args:
            key: Configuration key (supports dot notation for nested keys)
            default: Default value if key is not found
        """
        value = self._config
        for part in key.split("."):
            if not isinstance(value, dict) or part not in value:
                return default
            value = value[part]
        return value

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value (dot notation for nested keys). Nothing is written to disk."""
        parts = key.split(".")
        config = self._config
        for part in parts[:-1]:
            if part not in config:
                config[part] = {}
            config = config[part]
        config[parts[-1]] = value

    def _section(self, name: str, model_type: Any) -> Any:
        try:
            return model_type.model_validate(self.get(name, {}) or {})
        except ValidationError as e:
            raise ConfigError(f"Invalid '{name}' section: {e}", section=name) from e

    def model_spec(self) -> Optional[ModelSpec]:
        if self.get("model") is None:
            return None
        return self._section("model", ModelSpec)

    def chain_config(self) -> ChainConfig:
        return self._section("chain", ChainConfig)

    def estimation_settings(self) -> EstimationSettings:
        return self._section("estimation", EstimationSettings)

    def descriptive_options(self) -> DescriptiveOptions:
        return self._section("descriptives", DescriptiveOptions)

    def aux_statistics(self) -> Optional[List[StatDescriptor]]:
        raw = self.get("gof.aux")
        if raw is None:
            return None
        try:
            return [StatDescriptor.model_validate(item) for item in raw]
        except (ValidationError, TypeError) as e:
            raise ConfigError(f"Invalid 'gof.aux' entry: {e}", section="gof") from e

    def gof_thresholds(self) -> Tuple[float, float]:
        """(modeled, auxiliary) t-ratio thresholds."""
        return float(self.get("gof.modeled_threshold", 0.1)), float(self.get("gof.auxiliary_threshold", 1.0))


def load_section(path: Union[str, Path], model_type: Any) -> Any:
    """Validate a standalone JSON file (model, chain or estimation settings)."""
    try:
        return model_type.model_validate(read_json(path))
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}", path=str(path)) from e
