# mergmkit/statistics/bipartite.py
"""Statistics of the actor-object usage network X."""

from typing import List, Type

import numpy as np

from ..core.models import AttributeMode, StatLevel, TieLevel
from .base import Statistic, choose, shared_objects


class BipartiteStatistic(Statistic):
    level = StatLevel.X
    touches = frozenset({TieLevel.X})


class XEdge(BipartiteStatistic):
    name = "XEdge"
    description = "Actor using object"

    def compute(self, net):
        return float(net.edge_count(TieLevel.X))

    def change_x(self, net, i, o):
        return 1.0


class XStar2A(BipartiteStatistic):
    name = "XStar2A"
    description = "Pairs of objects used by actors"

    def compute(self, net):
        return float(choose(net.deg_xa, 2).sum())

    def change_x(self, net, i, o):
        return float(net.deg_xa[i])


class XStar3A(BipartiteStatistic):
    name = "XStar3A"
    description = "Triples of objects used by actors"

    def compute(self, net):
        return float(choose(net.deg_xa, 3).sum())

    def change_x(self, net, i, o):
        return float(choose(net.deg_xa[i], 2))


class XStar2B(BipartiteStatistic):
    name = "XStar2B"
    description = "Pair of actors sharing an object"

    def compute(self, net):
        return float(choose(net.deg_xo, 2).sum())

    def change_x(self, net, i, o):
        return float(net.deg_xo[o])


class XStar3B(BipartiteStatistic):
    name = "XStar3B"
    description = "Triples of actors sharing an object"

    def compute(self, net):
        return float(choose(net.deg_xo, 3).sum())

    def change_x(self, net, i, o):
        return float(choose(net.deg_xo[o], 2))


class X3Path(BipartiteStatistic):
    name = "X3Path"
    description = "Three-paths in object usage"

    def compute(self, net):
        return float(((net.deg_xa[:, None] - 1) * (net.deg_xo[None, :] - 1) * net.X).sum())

    def change_x(self, net, i, o):
        X = net.X
        return float(net.deg_xa[i] * net.deg_xo[o] + X[i] @ (net.deg_xo - 1) + X[:, o] @ (net.deg_xa - 1))


class X4Cycle(BipartiteStatistic):
    name = "X4Cycle"
    description = "Pair of actors sharing two objects"

    def compute(self, net):
        return float(choose(shared_objects(net.X), 2).sum() // 2)

    def change_x(self, net, i, o):
        X = net.X
        return float(X[:, o] @ (X @ X[i]))


class X3PathOpen(BipartiteStatistic):
    name = "X3PathOpen"
    description = "Three-paths not closed into a four-cycle"

    def compute(self, net):
        return X3Path.compute(self, net) - 4.0 * X4Cycle.compute(self, net)

    def change_x(self, net, i, o):
        return X3Path.change_x(self, net, i, o) - 4.0 * X4Cycle.change_x(self, net, i, o)


class XASA(BipartiteStatistic):
    name = "XASA"
    description = "Object usage degree of actors"
    alternating = True

    def compute(self, net):
        d = net.deg_xa.astype(float)
        return float(self.lam ** 2 * np.sum(self.q ** d + d / self.lam - 1.0))

    def change_x(self, net, i, o):
        return self.lam * (1.0 - self.q ** net.deg_xa[i])


class XASB(BipartiteStatistic):
    name = "XASB"
    description = "Usage degree of objects"
    alternating = True

    def compute(self, net):
        d = net.deg_xo.astype(float)
        return float(self.lam ** 2 * np.sum(self.q ** d + d / self.lam - 1.0))

    def change_x(self, net, i, o):
        return self.lam * (1.0 - self.q ** net.deg_xo[o])


class Alt4CycleA(BipartiteStatistic):
    name = "ALT4CYC_A"
    description = "Pair of actors sharing multiple objects"
    alternating = True

    def compute(self, net):
        so = shared_objects(net.X)
        upper = so[np.triu_indices_from(so, k=1)]
        upper = upper[upper >= 1]
        return float(self.lam * np.sum(1.0 - self.q ** (upper - 1)))

    def change_x(self, net, i, o):
        X = net.X
        so_i = X @ X[i]
        partners = (X[:, o] > 0) & (so_i >= 1)
        partners[i] = False
        return float(np.sum(self.q ** (so_i[partners] - 1)))


class IsolatesXA(BipartiteStatistic):
    name = "IsolatesXA"
    description = "Actors using no object"

    def compute(self, net):
        return float((net.deg_xa == 0).sum())

    def change_x(self, net, i, o):
        return -float(net.deg_xa[i] == 0)


class IsolatesXB(BipartiteStatistic):
    name = "IsolatesXB"
    description = "Objects used by no actor"

    def compute(self, net):
        return float((net.deg_xo == 0).sum())

    def change_x(self, net, i, o):
        return -float(net.deg_xo[o] == 0)


class XMatchB(BipartiteStatistic):
    name = "XMatchB"
    description = "Actors with same attribute values sharing object"
    attribute_mode = AttributeMode.MATCH
    twin = "XMismatchB"

    def compute(self, net):
        return float((self.same_matrix(net) * shared_objects(net.X)).sum() // 2)

    def change_x(self, net, i, o):
        return float(net.X[:, o] @ self.same_row(net, i))


class XMismatchB(XMatchB):
    name = "XMismatchB"
    description = "Actors with different attribute values sharing object"
    attribute_mode = AttributeMode.MISMATCH
    twin = "XMatchB"


class X4CycleMatch(BipartiteStatistic):
    name = "X4CycleMatch"
    description = "Actors with same attribute values sharing two objects"
    attribute_mode = AttributeMode.MATCH
    twin = "X4CycleMismatch"

    def compute(self, net):
        so = shared_objects(net.X)
        return float((choose(so, 2) * self.same_matrix(net)).sum() // 2)

    def change_x(self, net, i, o):
        X = net.X
        so_i = X @ X[i]
        so_i[i] = 0
        return float(np.sum(X[:, o] * self.same_row(net, i) * so_i))


class X4CycleMismatch(X4CycleMatch):
    name = "X4CycleMismatch"
    description = "Actors with different attribute values sharing two objects"
    attribute_mode = AttributeMode.MISMATCH
    twin = "X4CycleMatch"


def bipartite_statistics() -> List[Type[Statistic]]:
    return [
        XEdge, XStar2A, XStar3A, XStar2B, XStar3B, X3Path, X3PathOpen, X4Cycle,
        XASA, XASB, Alt4CycleA, IsolatesXA, IsolatesXB,
        XMatchB, XMismatchB, X4CycleMatch, X4CycleMismatch,
    ]
