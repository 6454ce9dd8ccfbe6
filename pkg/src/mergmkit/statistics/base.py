# mergmkit/statistics/base.py
import math
from abc import ABC, abstractmethod
from typing import ClassVar, FrozenSet, Optional

import numpy as np

from ..core.models import AttributeMode, StatDescriptor, StatLevel, TieLevel
from ..core.network import MultilevelNetwork


def choose(values: np.ndarray, k: int) -> np.ndarray:
    """Exact elementwise binomial coefficient C(values, k) for nonnegative ints."""
    values = np.asarray(values, dtype=np.int64)
    out = np.ones_like(values)
    for r in range(k):
        out = out * (values - r)
    return out // math.factorial(k)


def shared_partners(M: np.ndarray) -> np.ndarray:
    """Two-path counts of a one-mode matrix with a zeroed diagonal."""
    sp = M @ M
    np.fill_diagonal(sp, 0)
    return sp


def shared_objects(X: np.ndarray) -> np.ndarray:
    """SO: objects shared by each actor pair, zero diagonal."""
    so = X @ X.T
    np.fill_diagonal(so, 0)
    return so


def shared_actors(X: np.ndarray) -> np.ndarray:
    """SA: actor-users shared by each object pair, zero diagonal."""
    sa = X.T @ X
    np.fill_diagonal(sa, 0)
    return sa


def triangle_count(M: np.ndarray) -> int:
    if M.shape[0] < 3:
        return 0
    return int(np.trace(M @ M @ M)) // 6


class Statistic(ABC):
    """
    Base class of every catalog statistic.

    ``compute`` returns the global value. ``change`` returns the difference
    "dyad present minus dyad absent" and requires the dyad to be absent in
    ``net`` when called; ``change_statistics`` takes care of that.
    """

    name: ClassVar[str] = ""
    level: ClassVar[StatLevel] = StatLevel.A
    touches: ClassVar[FrozenSet[TieLevel]] = frozenset()
    description: ClassVar[str] = ""
    alternating: ClassVar[bool] = False
    attribute_mode: ClassVar[Optional[AttributeMode]] = None
    twin: ClassVar[Optional[str]] = None
    incremental: ClassVar[bool] = True

    def __init__(self, descriptor: StatDescriptor):
        self.descriptor = descriptor
        self.lam = float(descriptor.lambda_)
        self.q = 1.0 - 1.0 / self.lam
        self.attribute = descriptor.attribute

    @classmethod
    def needs_attribute(cls) -> bool:
        return cls.attribute_mode is not None

    @property
    def label(self) -> str:
        name = self.name
        if self.attribute:
            name = f"{self.attribute.capitalize()}_{name}"
        if self.alternating and self.lam != 2.0:
            name = f"{name}({self.lam:g})"
        return name

    @abstractmethod
    def compute(self, net: MultilevelNetwork) -> float:
        """Global value of the statistic."""
        pass

    def change(self, net: MultilevelNetwork, level: TieLevel, i: int, j: int) -> float:
        if level not in self.touches:
            return 0.0
        if level == TieLevel.A:
            return self.change_a(net, i, j)
        if level == TieLevel.B:
            return self.change_b(net, i, j)
        return self.change_x(net, i, j)

    def change_a(self, net: MultilevelNetwork, i: int, j: int) -> float:
        return self._recount_change(net, TieLevel.A, i, j)

    def change_b(self, net: MultilevelNetwork, o: int, p: int) -> float:
        return self._recount_change(net, TieLevel.B, o, p)

    def change_x(self, net: MultilevelNetwork, i: int, o: int) -> float:
        return self._recount_change(net, TieLevel.X, i, o)

    def _recount_change(self, net: MultilevelNetwork, level: TieLevel, i: int, j: int) -> float:
        # flips in place and restores before returning
        before = self.compute(net)
        net.flip(level, i, j)
        try:
            after = self.compute(net)
        finally:
            net.flip(level, i, j)
        return after - before

    # attribute helpers

    def same_matrix(self, net: MultilevelNetwork) -> np.ndarray:
        codes = net.attribute_codes(self.attribute)
        same = codes[:, None] == codes[None, :]
        return same if self.attribute_mode == AttributeMode.MATCH else ~same

    def same_row(self, net: MultilevelNetwork, i: int) -> np.ndarray:
        codes = net.attribute_codes(self.attribute)
        same = codes == codes[i]
        return same if self.attribute_mode == AttributeMode.MATCH else ~same

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"
