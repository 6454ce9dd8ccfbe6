# mergmkit/core/descriptives.py
"""Per-group descriptive statistics of the three networks and actor attributes."""

from collections import Counter
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.logger import get_logger
from .errors import IngestionError
from .models import AggregateRow, DescriptiveOptions, DescriptiveReport, GroupDescriptives, TieLevel
from .network import MultilevelNetwork

logger = get_logger(__name__)

SOCIAL = "Social"
MATERIAL = "Material"
USAGE = "Object usage"
MEMBERS = "Group member attributes"

# (key, section, label, is_count)
NETWORK_METRICS: List[Tuple[str, str, str, bool]] = [
    ("actors", SOCIAL, "Group members", True),
    ("density_A", SOCIAL, "Density", False),
    ("centralization_A", SOCIAL, "Degree centralization", False),
    ("avg_degree_A", SOCIAL, "Average degree", False),
    ("objects", MATERIAL, "Shared objects", True),
    ("density_B", MATERIAL, "Density", False),
    ("centralization_B", MATERIAL, "Degree centralization", False),
    ("avg_degree_B", MATERIAL, "Average degree", False),
    ("density_X", USAGE, "Density", False),
    ("avg_degree_XA", USAGE, "Average degree (actors)", False),
    ("avg_degree_XB", USAGE, "Average degree (objects)", False),
]


def density(net: MultilevelNetwork, level: TieLevel) -> float:
    if level == TieLevel.X:
        cells = net.n_actors * net.n_objects
    else:
        n = net.n_actors if level == TieLevel.A else net.n_objects
        cells = n * (n - 1) // 2
    return net.edge_count(level) / cells if cells else 0.0


def degree_centralization(degrees: np.ndarray) -> Optional[float]:
    """Freeman degree centralization; None when fewer than three nodes."""
    n = len(degrees)
    if n < 3:
        return None
    return float(np.sum(degrees.max() - degrees)) / ((n - 1) * (n - 2))


def average_degree(net: MultilevelNetwork, level: TieLevel) -> float:
    n = net.n_actors if level == TieLevel.A else net.n_objects
    return 2.0 * net.edge_count(level) / n if n else 0.0


def blau_index(values: Sequence[str], normalized: bool = True) -> float:
    """1 - sum of squared category shares, scaled to [0, 1] unless ``normalized`` is False."""
    n = len(values)
    if n == 0:
        return 0.0
    shares = np.array(list(Counter(values).values()), dtype=float) / n
    raw = 1.0 - float(np.sum(shares ** 2))
    if not normalized:
        return raw
    return raw * n / (n - 1) if n > 1 else 0.0


def binary_share(values: Sequence[str], positive: Sequence[str]) -> float:
    tokens = {t.strip().lower() for t in positive}
    if not values:
        return 0.0
    return sum(1 for v in values if str(v).strip().lower() in tokens) / len(values)


def attribute_metrics(net: MultilevelNetwork, options: DescriptiveOptions) -> List[Tuple[str, str]]:
    """(key, label) of the attribute summaries available on ``net``."""
    metrics = []
    for attr in options.binary:
        if attr in net.attributes:
            metrics.append((f"share_{attr}", options.binary_labels.get(attr, f"Share {attr}")))
    for attr in options.diversity:
        if attr in net.attributes:
            metrics.append((f"diversity_{attr}", f"{attr.capitalize()} diversity"))
    return metrics


def describe_group(net: MultilevelNetwork, options: Optional[DescriptiveOptions] = None) -> Dict[str, Optional[float]]:
    options = options or DescriptiveOptions()
    values: Dict[str, Optional[float]] = {
        "actors": float(net.n_actors),
        "density_A": density(net, TieLevel.A),
        "centralization_A": degree_centralization(net.deg_a),
        "avg_degree_A": average_degree(net, TieLevel.A),
        "objects": float(net.n_objects),
        "density_B": density(net, TieLevel.B),
        "centralization_B": degree_centralization(net.deg_b),
        "avg_degree_B": average_degree(net, TieLevel.B),
        "density_X": density(net, TieLevel.X),
        "avg_degree_XA": net.edge_count(TieLevel.X) / net.n_actors if net.n_actors else 0.0,
        "avg_degree_XB": net.edge_count(TieLevel.X) / net.n_objects if net.n_objects else 0.0,
    }
    for attr, positive in options.binary.items():
        if attr in net.attributes:
            values[f"share_{attr}"] = binary_share(net.attributes[attr], positive)
    for attr in options.diversity:
        if attr in net.attributes:
            values[f"diversity_{attr}"] = blau_index(net.attributes[attr], normalized=not options.raw_blau)
    return values


def _aggregate(key: str, section: str, label: str, is_count: bool, groups: List[GroupDescriptives]) -> AggregateRow:
    observed = [g.values.get(key) for g in groups]
    observed = [v for v in observed if v is not None]
    if not observed:
        return AggregateRow(metric=label, section=section)
    return AggregateRow(
        metric=label,
        section=section,
        average=float(np.mean(observed)),
        minimum=float(np.min(observed)),
        maximum=float(np.max(observed)),
        total=float(np.sum(observed)) if is_count else None,
    )


def describe(
    networks: Union[Mapping[str, MultilevelNetwork], Sequence[MultilevelNetwork]],
    options: Optional[DescriptiveOptions] = None,
) -> DescriptiveReport:
    """
    Descriptives for each group network plus unweighted average, minimum and
    maximum over groups (and totals for counts).

    Raises:
        IngestionError: no groups to describe
    """
    options = options or DescriptiveOptions()
    if not isinstance(networks, Mapping):
        networks = {
            (net.groups[0] if len(net.groups) == 1 else str(k + 1)): net for k, net in enumerate(networks)
        }
    if not networks:
        raise IngestionError("Dataset has no groups to describe")

    groups = [GroupDescriptives(group=name, values=describe_group(net, options)) for name, net in networks.items()]
    for group in groups:
        if group.values["centralization_A"] is None:
            logger.warning(f"Group {group.group} has fewer than 3 actors; centralization is undefined")

    metrics = [(key, section, label) for key, section, label, _ in NETWORK_METRICS]
    rows = [_aggregate(key, section, label, is_count, groups) for key, section, label, is_count in NETWORK_METRICS]
    first = next(iter(networks.values()))
    for key, label in attribute_metrics(first, options):
        metrics.append((key, MEMBERS, label))
        rows.append(_aggregate(key, MEMBERS, label, False, groups))
    return DescriptiveReport(groups=groups, aggregates=rows, metrics=metrics)

