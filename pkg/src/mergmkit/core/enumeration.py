# mergmkit/core/enumeration.py
"""
Exact enumeration of every tie configuration over the free dyads of a small
network. Used as a reference distribution for the sampler and estimator.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from ..statistics import Statistic, change_vector, evaluate, resolve_model
from ..utils.logger import get_logger
from .errors import StateSpaceTooLargeError
from .models import ExactExpectation, ModelSpec, TieLevel
from .network import MultilevelNetwork
from .sampler import ThetaLike, theta_array

logger = get_logger(__name__)

MAX_FREE_DYADS = 25


class StateSpace:
    """Distinct statistic vectors of all enumerated states with their multiplicities."""

    def __init__(self, statistics: Sequence[str], vectors: np.ndarray, counts: np.ndarray):
        self.statistics = list(statistics)
        self.vectors = vectors
        self.counts = counts

    @property
    def n_states(self) -> int:
        return int(self.counts.sum())

    def log_partition(self, theta: ThetaLike) -> float:
        values = theta_array(theta, len(self.statistics))
        return float(logsumexp(self.vectors @ values, b=self.counts))

    def probabilities(self, theta: ThetaLike) -> np.ndarray:
        """Probability mass of each distinct statistic vector."""
        values = theta_array(theta, len(self.statistics))
        log_weights = self.vectors @ values + np.log(self.counts)
        return np.exp(log_weights - logsumexp(log_weights))

    def expectation(self, theta: ThetaLike) -> np.ndarray:
        return self.probabilities(theta) @ self.vectors

    def covariance(self, theta: ThetaLike) -> np.ndarray:
        p = self.probabilities(theta)
        centered = self.vectors - p @ self.vectors
        return (centered * p[:, None]).T @ centered

    def log_likelihood(self, theta: ThetaLike, observed: Sequence[float]) -> float:
        values = theta_array(theta, len(self.statistics))
        return float(values @ np.asarray(observed, dtype=float)) - self.log_partition(values)

    def boundary_statistics(self, observed: Sequence[float]) -> List[str]:
        """Statistics whose observed value is the smallest or largest the state space reaches."""
        observed = np.asarray(observed, dtype=float)
        low, high = self.vectors.min(axis=0), self.vectors.max(axis=0)
        return [name for name, z, lo, hi in zip(self.statistics, observed, low, high) if z <= lo or z >= hi]

    def mle(self, observed: Sequence[float], start: Optional[ThetaLike] = None) -> np.ndarray:
        """Maximize the exact log-likelihood of an observed statistic vector."""
        observed = np.asarray(observed, dtype=float)
        boundary = self.boundary_statistics(observed)
        if boundary:
            logger.warning(f"Observed {', '.join(boundary)} on the boundary of the support; the MLE does not exist")
        x0 = np.zeros(len(self.statistics)) if start is None else theta_array(start, len(self.statistics))

        def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
            return -self.log_likelihood(theta, observed), self.expectation(theta) - observed

        result = optimize.minimize(objective, x0, jac=True, method="BFGS", options={"gtol": 1e-10})
        if not result.success:
            logger.warning(f"Exact MLE did not converge: {result.message}")
        return result.x


def free_dyads(net: MultilevelNetwork, free_levels: Sequence[TieLevel]) -> List[Tuple[TieLevel, int, int]]:
    return [
        (level, int(i), int(j))
        for level in free_levels
        for i, j in net.toggleable_dyads(level)
    ]


def enumerate_state_space(template: MultilevelNetwork, model: ModelSpec) -> StateSpace:
    """
    Walk all configurations of the free dyads in Gray-code order, one toggle
    per state. Ties on fixed levels are kept as in ``template``.

    Raises:
        StateSpaceTooLargeError: more than MAX_FREE_DYADS free dyads
    """
    statistics: List[Statistic] = resolve_model(model, template)
    net = template.empty_like(model.free_levels)
    dyads = free_dyads(net, model.free_levels)
    if len(dyads) > MAX_FREE_DYADS:
        raise StateSpaceTooLargeError(
            f"{len(dyads)} free dyads exceed the enumeration limit of {MAX_FREE_DYADS}", free_dyads=len(dyads)
        )
    logger.debug(f"Enumerating {2 ** len(dyads)} states over {len(dyads)} free dyads")

    z = evaluate(net, statistics)
    seen: Dict[Tuple[float, ...], int] = {}
    vectors: List[np.ndarray] = []
    counts: List[int] = []

    def record() -> None:
        key = tuple(np.round(z, 9))
        index = seen.get(key)
        if index is None:
            seen[key] = len(vectors)
            vectors.append(z.copy())
            counts.append(1)
        else:
            counts[index] += 1

    record()
    for k in range(1, 2 ** len(dyads)):
        # bit that changes between consecutive Gray codes
        level, i, j = dyads[(k & -k).bit_length() - 1]
        if net.has_tie(level, i, j):
            net.flip(level, i, j)
            z -= change_vector(net, level, i, j, statistics)
        else:
            z += change_vector(net, level, i, j, statistics)
            net.flip(level, i, j)
        record()
    return StateSpace([s.label for s in statistics], np.array(vectors), np.array(counts, dtype=float))


def exact_enumerate(template: MultilevelNetwork, model: ModelSpec, theta: ThetaLike) -> ExactExpectation:
    """Normalizing constant and expected statistics under ``theta``."""
    space = enumerate_state_space(template, model)
    log_z = space.log_partition(theta)
    return ExactExpectation(
        statistics=space.statistics,
        log_partition=log_z,
        partition=float(np.exp(log_z)),
        expectation=space.expectation(theta).tolist(),
        n_states=space.n_states,
    )
