# mergmkit/statistics/cross_level.py
"""Statistics spanning two or three tie levels."""

from typing import List, Type

import numpy as np

from ..core.models import AttributeMode, StatLevel, TieLevel
from .base import Statistic, choose, shared_actors, shared_objects

_AX = frozenset({TieLevel.A, TieLevel.X})
_BX = frozenset({TieLevel.B, TieLevel.X})
_AXB = frozenset({TieLevel.A, TieLevel.B, TieLevel.X})


class CrossLevelStatistic(Statistic):
    level = StatLevel.CROSS


class Star2AX(CrossLevelStatistic):
    name = "Star2AX"
    description = "Influence of social ties on usage of objects"
    touches = _AX

    def compute(self, net):
        return float(net.deg_a @ net.deg_xa)

    def change_a(self, net, i, j):
        return float(net.deg_xa[i] + net.deg_xa[j])

    def change_x(self, net, i, o):
        return float(net.deg_a[i])


class StarAXAA(CrossLevelStatistic):
    name = "StarAXAA"
    description = "Influence of social ties on usage of objects in dyads"
    touches = _AX

    def compute(self, net):
        return float(net.deg_xa @ choose(net.deg_a, 2))

    def change_a(self, net, i, j):
        return float(net.deg_xa[i] * net.deg_a[i] + net.deg_xa[j] * net.deg_a[j])

    def change_x(self, net, i, o):
        return float(choose(net.deg_a[i], 2))


class Star2BX(CrossLevelStatistic):
    name = "Star2BX"
    description = "Usage of objects embedded in material contexts"
    touches = _BX

    def compute(self, net):
        return float(net.deg_b @ net.deg_xo)

    def change_b(self, net, o, p):
        return float(net.deg_xo[o] + net.deg_xo[p])

    def change_x(self, net, i, o):
        return float(net.deg_b[o])


class TriangleXAX(CrossLevelStatistic):
    name = "TriangleXAX"
    description = "Influence of dyadic social ties on object sharing"
    touches = _AX

    def compute(self, net):
        return float((net.A * shared_objects(net.X)).sum() // 2)

    def change_a(self, net, i, j):
        return float(net.X[i] @ net.X[j])

    def change_x(self, net, i, o):
        return float(net.A[i] @ net.X[:, o])


class ATXAX(CrossLevelStatistic):
    name = "ATXAX"
    description = "Social ties sharing multiple objects"
    touches = _AX
    alternating = True

    def compute(self, net):
        so = shared_objects(net.X)
        return float(self.lam * np.sum(net.A * (1.0 - self.q ** so)) / 2.0)

    def change_a(self, net, i, j):
        return self.lam * (1.0 - self.q ** float(net.X[i] @ net.X[j]))

    def change_x(self, net, i, o):
        X = net.X
        so_i = X @ X[i]
        partners = (net.A[i] > 0) & (X[:, o] > 0)
        return float(np.sum(self.q ** so_i[partners]))


class L3XAX(CrossLevelStatistic):
    name = "L3XAX"
    description = "Social ties between actors using objects"
    touches = _AX

    def compute(self, net):
        d = net.deg_xa
        return float((net.A * (np.outer(d, d) - shared_objects(net.X))).sum() // 2)

    def change_a(self, net, i, j):
        return float(net.deg_xa[i] * net.deg_xa[j] - net.X[i] @ net.X[j])

    def change_x(self, net, i, o):
        return float(net.A[i] @ net.deg_xa - net.A[i] @ net.X[:, o])


class TXAXMatch(CrossLevelStatistic):
    name = "TXAXMatch"
    description = "Influence of dyadic social ties between actors with same attribute values on object sharing"
    touches = _AX
    attribute_mode = AttributeMode.MATCH
    twin = "TXAXMismatch"

    def compute(self, net):
        return float((net.A * self.same_matrix(net) * shared_objects(net.X)).sum() // 2)

    def change_a(self, net, i, j):
        return float(self.same_row(net, i)[j] * (net.X[i] @ net.X[j]))

    def change_x(self, net, i, o):
        return float((net.A[i] * self.same_row(net, i)) @ net.X[:, o])


class TXAXMismatch(TXAXMatch):
    name = "TXAXMismatch"
    description = "Influence of dyadic social ties between actors with different attribute values on object sharing"
    attribute_mode = AttributeMode.MISMATCH
    twin = "TXAXMatch"


class TriangleXBX(CrossLevelStatistic):
    name = "TriangleXBX"
    description = "Usage of objects that are part of material contexts"
    touches = _BX

    def compute(self, net):
        return float((net.B * shared_actors(net.X)).sum() // 2)

    def change_b(self, net, o, p):
        return float(net.X[:, o] @ net.X[:, p])

    def change_x(self, net, i, o):
        return float(net.B[o] @ net.X[i])


class ATXBX(CrossLevelStatistic):
    name = "ATXBX"
    description = "Material ties sharing multiple users"
    touches = _BX
    alternating = True

    def compute(self, net):
        sa = shared_actors(net.X)
        return float(self.lam * np.sum(net.B * (1.0 - self.q ** sa)) / 2.0)

    def change_b(self, net, o, p):
        return self.lam * (1.0 - self.q ** float(net.X[:, o] @ net.X[:, p]))

    def change_x(self, net, i, o):
        X = net.X
        sa_o = X.T @ X[:, o]
        partners = (net.B[o] > 0) & (X[i] > 0)
        return float(np.sum(self.q ** sa_o[partners]))


class L3XBX(CrossLevelStatistic):
    name = "L3XBX"
    description = "Engagement with same materiality"
    touches = _BX

    def compute(self, net):
        d = net.deg_xo
        return float((net.B * (np.outer(d, d) - shared_actors(net.X))).sum() // 2)

    def change_b(self, net, o, p):
        return float(net.deg_xo[o] * net.deg_xo[p] - net.X[:, o] @ net.X[:, p])

    def change_x(self, net, i, o):
        return float(net.B[o] @ net.deg_xo - net.B[o] @ net.X[i])


class L3AXB(CrossLevelStatistic):
    name = "L3AXB"
    description = "Socially tied actors using materially tied objects"
    touches = _AXB

    def compute(self, net):
        return float(net.deg_a @ net.X @ net.deg_b)

    def change_a(self, net, i, j):
        return float((net.X[i] + net.X[j]) @ net.deg_b)

    def change_b(self, net, o, p):
        return float((net.X[:, o] + net.X[:, p]) @ net.deg_a)

    def change_x(self, net, i, o):
        return float(net.deg_a[i] * net.deg_b[o])


class C4AXB(CrossLevelStatistic):
    name = "C4AXB"
    description = "Influence of dyadic social ties on engagement with the same material context"
    touches = _AXB

    def compute(self, net):
        return float((net.A * (net.X @ net.B @ net.X.T)).sum() // 2)

    def change_a(self, net, i, j):
        return float(net.X[i] @ net.B @ net.X[j])

    def change_b(self, net, o, p):
        return float(net.X[:, o] @ net.A @ net.X[:, p])

    def change_x(self, net, i, o):
        return float(net.A[i] @ net.X @ net.B[o])


def cross_level_statistics() -> List[Type[Statistic]]:
    return [
        Star2AX, StarAXAA, Star2BX, TriangleXAX, ATXAX, L3XAX, TXAXMatch, TXAXMismatch,
        TriangleXBX, ATXBX, L3XBX, L3AXB, C4AXB,
    ]
