# mergmkit/statistics/summaries.py
"""
Goodness-of-fit summaries: spread and skewness of the degree sequences and
clustering ratios. These are not additive over dyads, so their change
statistics are obtained by recounting.
"""

from typing import List, Type

import numpy as np
from scipy import stats

from ..core.models import StatLevel, TieLevel
from .base import Statistic, choose, shared_objects, triangle_count

_DEGREES = {
    "A": (StatLevel.A, TieLevel.A, "actor degrees in A"),
    "B": (StatLevel.B, TieLevel.B, "object degrees in B"),
    "XA": (StatLevel.X, TieLevel.X, "actor degrees in X"),
    "XB": (StatLevel.X, TieLevel.X, "object degrees in X"),
}


def degree_skewness(degrees: np.ndarray) -> float:
    """Bias-corrected sample skewness; 0 for fewer than three nodes or constant degrees."""
    d = np.asarray(degrees, dtype=float)
    if d.size < 3 or np.std(d) == 0:
        return 0.0
    return float(stats.skew(d, bias=False))


class SummaryStatistic(Statistic):
    incremental = False


class DegreeSpread(SummaryStatistic):
    sequence = "A"

    def compute(self, net):
        d = net.degrees(self.sequence)
        return float(np.std(d)) if d.size else 0.0


class DegreeSkew(SummaryStatistic):
    sequence = "A"

    def compute(self, net):
        return degree_skewness(net.degrees(self.sequence))


def _degree_summaries() -> List[Type[Statistic]]:
    classes: List[Type[Statistic]] = []
    for sequence, (level, tie, text) in _DEGREES.items():
        for base, prefix, what in ((DegreeSpread, "stddev_degree", "Standard deviation"), (DegreeSkew, "skew_degree", "Skewness")):
            name = f"{prefix}{sequence}"
            classes.append(
                type(
                    name,
                    (base,),
                    {
                        "name": name,
                        "sequence": sequence,
                        "level": level,
                        "touches": frozenset({tie}),
                        "description": f"{what} of {text}",
                    },
                )
            )
    return classes


class ClusteringA(SummaryStatistic):
    name = "clusteringA"
    level = StatLevel.A
    touches = frozenset({TieLevel.A})
    description = "Global clustering of A"

    def compute(self, net):
        stars = int(choose(net.deg_a, 2).sum())
        return 3.0 * triangle_count(net.A) / stars if stars else 0.0


class ClusteringB(SummaryStatistic):
    name = "clusteringB"
    level = StatLevel.B
    touches = frozenset({TieLevel.B})
    description = "Global clustering of B"

    def compute(self, net):
        stars = int(choose(net.deg_b, 2).sum())
        return 3.0 * triangle_count(net.B) / stars if stars else 0.0


class ClusteringX(SummaryStatistic):
    name = "clusteringX"
    level = StatLevel.X
    touches = frozenset({TieLevel.X})
    description = "Bipartite clustering of X"

    def compute(self, net):
        paths = int(((net.deg_xa[:, None] - 1) * (net.deg_xo[None, :] - 1) * net.X).sum())
        if not paths:
            return 0.0
        cycles = int(choose(shared_objects(net.X), 2).sum()) // 2
        return 4.0 * cycles / paths


def summary_statistics() -> List[Type[Statistic]]:
    return _degree_summaries() + [ClusteringA, ClusteringB, ClusteringX]
