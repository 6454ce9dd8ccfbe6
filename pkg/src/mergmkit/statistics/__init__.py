# mergmkit/statistics/__init__.py
"""
Statistic catalog: registry of configuration statistics, alias resolution
for the English pattern labels, and model-level evaluation helpers.
"""

import re
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Type, Union

import numpy as np

from ..core.errors import (
    AmbiguousAliasError,
    InvalidModelError,
    UnknownAttributeError,
    UnknownStatisticError,
)
from ..core.models import DyadRef, ModelSpec, StatDescriptor, StatLevel, TieLevel
from ..core.network import MultilevelNetwork
from ..utils.logger import get_logger
from .base import Statistic
from .bipartite import bipartite_statistics
from .cross_level import cross_level_statistics
from .summaries import summary_statistics
from .within_level import one_mode_statistics

logger = get_logger(__name__)

# Register statistics
CATALOG: Dict[str, Type[Statistic]] = {
    cls.name: cls
    for cls in one_mode_statistics() + bipartite_statistics() + cross_level_statistics() + summary_statistics()
}

_A, _B, _X = StatLevel.A, StatLevel.B, StatLevel.X

# English pattern labels; level-dependent labels are resolved with the descriptor's level
ALIASES: Dict[str, Dict[Optional[StatLevel], str]] = {
    "edge": {_A: "EdgeA", _B: "EdgeB", _X: "XEdge"},
    "2-star": {_A: "Star2A", _B: "Star2B", _X: "XStar2A"},
    "degree spread": {_A: "ASA", _B: "ASB"},
    "degree distribution": {_A: "ASA", _B: "ASB"},
    "triadic closure": {_A: "ATA", _B: "ATB"},
    "tie between actors with same attribute value": {None: "MatchA"},
    "actor using object": {None: "XEdge"},
    "pairs of objects used by actors": {None: "XStar2A"},
    "pair of actors sharing an object": {None: "XStar2B"},
    "object usage degree of actors": {None: "XASA"},
    "usage degree of objects": {None: "XASB"},
    "pair of actors sharing objects": {None: "ALT4CYC_A"},
    "pair of actors sharing multiple objects": {None: "ALT4CYC_A"},
    "actors with same attribute values sharing object": {None: "XMatchB"},
    "x2starmatch": {None: "XMatchB"},
    "x2starmismatch": {None: "XMismatchB"},
    "influence of social ties on usage of objects": {None: "Star2AX"},
    "influence of dyadic social ties on usage of objects": {None: "StarAXAA"},
    "influence of social ties on usage of objects in dyads": {None: "StarAXAA"},
    "influence of dyadic social ties on object sharing": {None: "TriangleXAX"},
    "influence of dyadic social ties between actors with same attribute values on object sharing": {None: "TXAXMatch"},
    "usage of objects that are part of material contexts": {None: "TriangleXBX"},
    "engagement with same materiality": {None: "L3XBX"},
    "influence of dyadic social ties on engagement with the same material context": {None: "C4AXB"},
}

_HYPOTHESIS_TAG = re.compile(r"\s*\[h\d+\]$")


def normalize_label(label: str) -> str:
    """Lower-case, collapse whitespace and drop a trailing hypothesis tag such as "[H1]"."""
    text = " ".join(label.strip().lower().split())
    return _HYPOTHESIS_TAG.sub("", text)


def get_statistic(name: str) -> Type[Statistic]:
    """Get statistic class by catalog id."""
    if name not in CATALOG:
        raise UnknownStatisticError(
            f"Unknown statistic: {name}. Available statistics: {', '.join(CATALOG)}", statistic=name
        )
    return CATALOG[name]


def list_statistics() -> Dict[str, Type[Statistic]]:
    """Get dictionary of available statistics."""
    return CATALOG.copy()


def _lookup_id(desc: StatDescriptor, aliases: Optional[Mapping[str, str]]) -> str:
    if desc.id in CATALOG:
        return desc.id
    label = normalize_label(desc.id)
    if aliases:
        rebound = {normalize_label(k): v for k, v in aliases.items()}
        if label in rebound:
            return rebound[label]
    targets = ALIASES.get(label)
    if targets is None:
        by_case = {name.lower(): name for name in CATALOG}
        if label in by_case:
            return by_case[label]
        raise UnknownStatisticError(
            f"Unknown statistic: {desc.id}. Use a catalog id or a known pattern label", statistic=desc.id
        )
    if None in targets:
        return targets[None]
    if len(targets) == 1:
        return next(iter(targets.values()))
    if desc.level is None or desc.level not in targets:
        raise AmbiguousAliasError(
            f"Label '{desc.id}' exists on several levels ({', '.join(l.value for l in targets)}); set 'level'",
            statistic=desc.id,
        )
    return targets[desc.level]


def resolve_descriptor(desc: StatDescriptor, aliases: Optional[Mapping[str, str]] = None) -> StatDescriptor:
    """
    Canonical form of a descriptor: catalog id, the statistic's level, the
    id matching the requested attribute mode and λ reset to the default on
    non-alternating statistics.

    Raises:
        UnknownStatisticError: id is neither a catalog id nor a known label
        AmbiguousAliasError: label spans levels and no level was given
        InvalidModelError: attribute or mode inconsistent with the statistic
    """
    cls = get_statistic(_lookup_id(desc, aliases))
    if desc.mode is not None:
        if cls.attribute_mode is None:
            raise InvalidModelError(f"Statistic {cls.name} takes no attribute mode", statistic=cls.name)
        if desc.mode != cls.attribute_mode:
            cls = get_statistic(cls.twin)
    if cls.needs_attribute() and not desc.attribute:
        raise InvalidModelError(f"Statistic {cls.name} requires an attribute", statistic=cls.name)
    if desc.attribute and not cls.needs_attribute():
        raise InvalidModelError(f"Statistic {cls.name} does not take an attribute", statistic=cls.name)
    if desc.level is not None and desc.id in CATALOG and desc.level != cls.level:
        raise InvalidModelError(
            f"Statistic {cls.name} is defined on level {cls.level.value}, not {desc.level.value}", statistic=cls.name
        )
    return StatDescriptor(
        id=cls.name,
        level=cls.level,
        lambda_=desc.lambda_ if cls.alternating else 2.0,
        attribute=desc.attribute,
        mode=cls.attribute_mode,
    )


def make_statistic(desc: StatDescriptor, aliases: Optional[Mapping[str, str]] = None) -> Statistic:
    canonical = resolve_descriptor(desc, aliases)
    return get_statistic(canonical.id)(canonical)


def canonical_model(model: ModelSpec) -> ModelSpec:
    """ModelSpec with every descriptor in canonical form; aliases are consumed."""
    stats = [resolve_descriptor(d, model.aliases) for d in model.stats]
    seen = {}
    for original, desc in zip(model.stats, stats):
        if desc.key() in seen:
            raise InvalidModelError(
                f"Statistics '{seen[desc.key()]}' and '{original.id}' resolve to the same descriptor {desc.id}",
                statistic=desc.id,
            )
        seen[desc.key()] = original.id
    if not model.free_levels:
        raise InvalidModelError("Model has no free level")
    touched = set()
    for desc in stats:
        touched |= CATALOG[desc.id].touches
    untouched = [level.value for level in model.free_levels if level not in touched]
    if untouched:
        raise InvalidModelError(
            f"Free level(s) {', '.join(untouched)} are not touched by any model statistic", levels=untouched
        )
    return ModelSpec(stats=stats, free_levels=list(model.free_levels))


def resolve_model(model: ModelSpec, net: Optional[MultilevelNetwork] = None) -> List[Statistic]:
    """
    Validate a model against the catalog (and the network's attributes when
    given) and instantiate its statistics in model order.
    """
    canonical = canonical_model(model)
    statistics = [get_statistic(d.id)(d) for d in canonical.stats]
    if net is not None:
        for stat in statistics:
            if stat.attribute and stat.attribute not in net.attributes:
                raise UnknownAttributeError(
                    f"Statistic {stat.name} uses attribute '{stat.attribute}' which the network does not have. "
                    f"Available attributes: {', '.join(net.attributes) or 'none'}",
                    attribute=stat.attribute,
                )
    logger.debug(f"Resolved model: {', '.join(stat.label for stat in statistics)}")
    return statistics


def global_statistic(net: MultilevelNetwork, desc: StatDescriptor) -> float:
    stat = make_statistic(desc)
    if stat.attribute:
        net.attribute_codes(stat.attribute)
    return stat.compute(net)


def evaluate(net: MultilevelNetwork, statistics: Sequence[Statistic]) -> np.ndarray:
    return np.array([stat.compute(net) for stat in statistics], dtype=float)


def statistic_vector(net: MultilevelNetwork, model: Union[ModelSpec, Sequence[Statistic]]) -> np.ndarray:
    """Global statistic values aligned with the model's statistics."""
    statistics = resolve_model(model, net) if isinstance(model, ModelSpec) else model
    return evaluate(net, statistics)


def change_vector(net: MultilevelNetwork, level: TieLevel, i: int, j: int, statistics: Sequence[Statistic]) -> np.ndarray:
    """Change statistics of an absent dyad; the network is left as it was."""
    return np.array([stat.change(net, level, i, j) for stat in statistics], dtype=float)


def change_statistics(
    net: MultilevelNetwork, dyad: DyadRef, model: Union[ModelSpec, Sequence[Statistic]]
) -> np.ndarray:
    """
    z(net with dyad present) - z(net with dyad absent), whatever the dyad's
    current state.

    Raises:
        StructuralZeroError: the dyad spans two groups
        DyadRangeError: endpoints out of range
    """
    net.check_dyad(dyad)
    statistics = resolve_model(model, net) if isinstance(model, ModelSpec) else model
    work = net
    if net.has_tie(dyad.level, dyad.source, dyad.target):
        work = net.copy()
        work.flip(dyad.level, dyad.source, dyad.target)
    return change_vector(work, dyad.level, dyad.source, dyad.target, statistics)


def default_gof_statistics(net: Optional[MultilevelNetwork] = None, attributes: Optional[Iterable[str]] = None) -> List[StatDescriptor]:
    """
    Auxiliary goodness-of-fit set: every catalog statistic, with each
    attribute statistic repeated for every actor attribute.
    """
    if attributes is None:
        attributes = net.attribute_names if net is not None else []
    attributes = list(attributes)
    descriptors = []
    for name, cls in CATALOG.items():
        if cls.needs_attribute():
            descriptors.extend(StatDescriptor(id=name, attribute=attr) for attr in attributes)
        else:
            descriptors.append(StatDescriptor(id=name))
    return descriptors


__all__ = [
    "ALIASES",
    "CATALOG",
    "Statistic",
    "canonical_model",
    "change_statistics",
    "change_vector",
    "default_gof_statistics",
    "evaluate",
    "get_statistic",
    "global_statistic",
    "list_statistics",
    "make_statistic",
    "normalize_label",
    "resolve_descriptor",
    "resolve_model",
    "statistic_vector",
]
