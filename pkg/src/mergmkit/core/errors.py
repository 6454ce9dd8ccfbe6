# mergmkit/core/errors.py
"""
Exception hierarchy for mergmkit.

Errors about malformed values also derive from ValueError so that callers
catching ValueError keep working.
"""

from typing import Any, Dict, Optional


class MergmError(Exception):
    """Base class for all mergmkit errors."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the CLI error report."""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


# netcore

class NetworkError(MergmError, ValueError):
    """Invalid network construction or mutation."""


class UnknownNodeError(NetworkError):
    pass


class SelfTieError(NetworkError):
    pass


class StructuralZeroError(NetworkError):
    """A tie or dyad connects nodes of different groups."""


class MissingAttributeError(NetworkError):
    pass


class DyadRangeError(NetworkError):
    pass


class LevelMismatchError(NetworkError):
    pass


class SchemaMismatchError(NetworkError):
    pass


# statcat

class CatalogError(MergmError, ValueError):
    """Problems resolving statistics or models against the catalog."""


class UnknownStatisticError(CatalogError):
    pass


class UnknownAttributeError(CatalogError):
    pass


class AmbiguousAliasError(CatalogError):
    pass


class InvalidModelError(CatalogError):
    pass


# sampler

class SamplerError(MergmError):
    pass


class StateSpaceTooLargeError(SamplerError, ValueError):
    pass


# estimator

class EstimationError(MergmError):
    pass


class ConstantStatisticError(EstimationError, ValueError):
    pass


class SingularCovarianceError(EstimationError):
    def __init__(self, message: str, pair: Optional[tuple] = None, **details: Any):
        super().__init__(message, pair=pair, **details)
        self.pair = pair


class ZeroVarianceError(EstimationError, ValueError):
    pass


# gof

class GofError(MergmError):
    pass


# ingestion

class IngestionError(MergmError, ValueError):
    pass


class MalformedRowError(IngestionError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None, **details: Any):
        super().__init__(message, path=path, line=line, **details)
        self.path = path
        self.line = line


class UnknownLevelError(MalformedRowError):
    pass


class DanglingReferenceError(MalformedRowError):
    pass


# configuration

class ConfigError(MergmError, ValueError):
    """Unreadable or invalid configuration document."""
