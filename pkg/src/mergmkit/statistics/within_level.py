# mergmkit/statistics/within_level.py
"""One-mode statistics, defined once and instantiated for the A and B networks."""

from typing import ClassVar, List, Type

import numpy as np

from ..core.models import AttributeMode, StatLevel, TieLevel
from ..core.network import MultilevelNetwork
from .base import Statistic, choose, shared_partners, triangle_count


class OneModeStatistic(Statistic):
    family: ClassVar[str] = ""
    tie: ClassVar[TieLevel] = TieLevel.A

    def matrix(self, net: MultilevelNetwork) -> np.ndarray:
        return net.A if self.tie == TieLevel.A else net.B

    def degree(self, net: MultilevelNetwork) -> np.ndarray:
        return net.deg_a if self.tie == TieLevel.A else net.deg_b

    def change(self, net: MultilevelNetwork, level: TieLevel, i: int, j: int) -> float:
        if level != self.tie:
            return 0.0
        return self.change_one_mode(net, i, j)

    def change_one_mode(self, net: MultilevelNetwork, i: int, j: int) -> float:
        return self._recount_change(net, self.tie, i, j)


class Edge(OneModeStatistic):
    family = "Edge"
    description = "Edge"

    def compute(self, net):
        return float(net.edge_count(self.tie))

    def change_one_mode(self, net, i, j):
        return 1.0


class StarK(OneModeStatistic):
    k: ClassVar[int] = 2
    description = "2-star"

    def compute(self, net):
        return float(choose(self.degree(net), self.k).sum())

    def change_one_mode(self, net, i, j):
        d = self.degree(net)
        return float(choose(d[[i, j]], self.k - 1).sum())


class Triangle(OneModeStatistic):
    family = "Triangle"
    description = "Triangle"

    def compute(self, net):
        return float(triangle_count(self.matrix(net)))

    def change_one_mode(self, net, i, j):
        M = self.matrix(net)
        return float(M[i] @ M[j])


class Cycle4(OneModeStatistic):
    family = "Cycle4"
    description = "4-cycle"

    def compute(self, net):
        sp = shared_partners(self.matrix(net))
        return float(choose(sp, 2).sum() // 4)

    def change_one_mode(self, net, i, j):
        M = self.matrix(net)
        return float(M[j] @ (M @ M[i]))


class Isolates(OneModeStatistic):
    family = "Isolates"
    description = "Isolated node"

    def compute(self, net):
        return float((self.degree(net) == 0).sum())

    def change_one_mode(self, net, i, j):
        d = self.degree(net)
        return -float(d[i] == 0) - float(d[j] == 0)


class IsolateEdges(OneModeStatistic):
    family = "IsolateEdges"
    description = "Isolated dyad"

    def compute(self, net):
        ones = self.degree(net) == 1
        M = self.matrix(net)
        return float(M[np.ix_(ones, ones)].sum() // 2)

    def change_one_mode(self, net, i, j):
        M, d = self.matrix(net), self.degree(net)
        delta = float(d[i] == 0 and d[j] == 0)
        for node in (i, j):
            if d[node] == 1:
                partner = int(np.flatnonzero(M[node])[0])
                if d[partner] == 1:
                    delta -= 1.0
        return delta


class AlternatingStar(OneModeStatistic):
    family = "AS"
    description = "Degree spread"
    alternating = True

    def compute(self, net):
        d = self.degree(net).astype(float)
        return float(self.lam ** 2 * np.sum(self.q ** d + d / self.lam - 1.0))

    def change_one_mode(self, net, i, j):
        d = self.degree(net)
        return self.lam * (1.0 - self.q ** d[i]) + self.lam * (1.0 - self.q ** d[j])


class AlternatingTriangle(OneModeStatistic):
    family = "AT"
    description = "Triadic closure"
    alternating = True

    def compute(self, net):
        M = self.matrix(net)
        sp = shared_partners(M)
        return float(self.lam * np.sum(M * (1.0 - self.q ** sp)) / 2.0)

    def change_one_mode(self, net, i, j):
        M = self.matrix(net)
        sp_i, sp_j = M @ M[i], M @ M[j]
        common = (M[i] * M[j]) > 0
        delta = self.lam * (1.0 - self.q ** sp_i[j])
        return float(delta + np.sum(self.q ** sp_i[common]) + np.sum(self.q ** sp_j[common]))


class AlternatingTwoPath(OneModeStatistic):
    family = "A2P"
    description = "Alternating two-paths"
    alternating = True

    def compute(self, net):
        sp = shared_partners(self.matrix(net))
        return float(self.lam * np.sum(1.0 - self.q ** sp) / 2.0)

    def change_one_mode(self, net, i, j):
        M = self.matrix(net)
        sp_i, sp_j = M @ M[i], M @ M[j]
        return float(np.sum(self.q ** sp_i[M[j] > 0]) + np.sum(self.q ** sp_j[M[i] > 0]))


class Homophily(OneModeStatistic):
    description = "Tie between actors with same attribute value"

    def compute(self, net):
        return float((net.A * self.same_matrix(net)).sum() // 2)

    def change_one_mode(self, net, i, j):
        return float(self.same_row(net, i)[j])


def for_tie(cls: Type[OneModeStatistic], tie: TieLevel, name: str = "") -> Type[OneModeStatistic]:
    """Concrete subclass of a one-mode family bound to the A or B network."""
    name = name or f"{cls.family}{tie.value}"
    return type(
        name,
        (cls,),
        {"name": name, "tie": tie, "level": StatLevel(tie.value), "touches": frozenset({tie})},
    )


def _stars(tie: TieLevel) -> List[Type[OneModeStatistic]]:
    stars = []
    for k in (2, 3, 4, 5):
        cls = type(f"Star{k}", (StarK,), {"k": k, "family": f"Star{k}", "description": f"{k}-star"})
        stars.append(for_tie(cls, tie))
    return stars


def _homophily(mode: AttributeMode, twin: str, name: str) -> Type[OneModeStatistic]:
    cls = for_tie(Homophily, TieLevel.A, name=name)
    cls.attribute_mode = mode
    cls.twin = twin
    if mode == AttributeMode.MISMATCH:
        cls.description = "Tie between actors with different attribute values"
    return cls


def one_mode_statistics() -> List[Type[Statistic]]:
    classes: List[Type[Statistic]] = []
    for tie in (TieLevel.A, TieLevel.B):
        classes.append(for_tie(Edge, tie))
        classes.extend(_stars(tie))
        classes.extend(
            for_tie(cls, tie)
            for cls in (Triangle, Cycle4, Isolates, IsolateEdges, AlternatingStar, AlternatingTriangle, AlternatingTwoPath)
        )
        if tie == TieLevel.A:
            classes.append(_homophily(AttributeMode.MATCH, "MismatchA", "MatchA"))
            classes.append(_homophily(AttributeMode.MISMATCH, "MatchA", "MismatchA"))
    return classes
