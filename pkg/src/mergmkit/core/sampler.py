# mergmkit/core/sampler.py
"""
Metropolis-Hastings tie-toggle sampler over the free levels of a
multilevel network.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..statistics import Statistic, change_vector, evaluate, resolve_model
from ..utils.logger import get_logger
from .errors import SamplerError
from .models import ChainConfig, ModelSpec, SampleSummary, Theta, TieLevel
from .network import MultilevelNetwork

logger = get_logger(__name__)

ThetaLike = Union[Theta, Sequence[float], np.ndarray]
DrawCallback = Callable[[MultilevelNetwork], None]

# draws inspected by the degeneracy heuristic
MIN_DEGENERACY_DRAWS = 10


def resolve_seed(seed: Optional[int]) -> int:
    """Return the seed, drawing one from fresh entropy (and logging it) when absent."""
    if seed is not None:
        return int(seed)
    seed = int(np.random.SeedSequence().entropy % (2 ** 63))
    logger.info(f"No seed given; using seed {seed}")
    return seed


def derive_seeds(seed: Optional[int], n: int) -> List[int]:
    """Expand one top-level seed into ``n`` independent chain seeds."""
    children = np.random.SeedSequence(resolve_seed(seed)).spawn(n)
    return [int(child.generate_state(1, dtype=np.uint64)[0] % (2 ** 63)) for child in children]


def theta_array(theta: ThetaLike, size: int) -> np.ndarray:
    values = theta.as_array() if isinstance(theta, Theta) else np.asarray(theta, dtype=float)
    if values.shape != (size,):
        raise SamplerError(f"theta has {values.size} entries but the model has {size} statistics")
    if not np.all(np.isfinite(values)):
        raise SamplerError("theta entries must be finite")
    return values


def proposal_levels(
    net: MultilevelNetwork,
    free_levels: Sequence[TieLevel],
    level_choice: Optional[Dict[TieLevel, float]] = None,
) -> Tuple[List[TieLevel], np.ndarray]:
    """
    Free levels with at least one toggleable dyad and their cumulative
    proposal probabilities. Weights default to the toggleable dyad counts.
    """
    levels, weights = [], []
    for level in free_levels:
        count = net.n_toggleable(level)
        weight = float(count) if level_choice is None else float(level_choice.get(level, 0.0))
        if count and weight > 0:
            levels.append(level)
            weights.append(weight)
    if not levels:
        raise SamplerError(
            "No toggleable dyads on the free levels", free_levels=[level.value for level in free_levels]
        )
    cumulative = np.cumsum(weights) / np.sum(weights)
    cumulative[-1] = 1.0
    return levels, cumulative


def propose(
    net: MultilevelNetwork,
    statistics: Sequence[Statistic],
    theta: np.ndarray,
    level: TieLevel,
    i: int,
    j: int,
    rng: np.random.Generator,
) -> Optional[np.ndarray]:
    """
    Propose toggling dyad (i, j) and accept with probability
    min(1, exp(theta . delta)). Returns the signed statistic change when the
    toggle is accepted, otherwise None with the network unchanged.
    """
    present = net.has_tie(level, i, j)
    if present:
        net.flip(level, i, j)
    delta = change_vector(net, level, i, j, statistics)
    if present:
        delta = -delta
    log_ratio = float(theta @ delta)
    if log_ratio >= 0.0 or rng.random() < math.exp(log_ratio):
        if not present:
            net.flip(level, i, j)
        return delta
    if present:
        net.flip(level, i, j)
    return None


def mh_step(
    state: MultilevelNetwork,
    theta: ThetaLike,
    model: ModelSpec,
    rng: np.random.Generator,
    level_choice: Optional[Dict[TieLevel, float]] = None,
) -> MultilevelNetwork:
    """One Metropolis-Hastings step; mutates and returns ``state``."""
    statistics = resolve_model(model, state)
    values = theta_array(theta, len(statistics))
    levels, cumulative = proposal_levels(state, model.free_levels, level_choice)
    level = levels[int(np.searchsorted(cumulative, rng.random(), side="right"))]
    dyads = state.toggleable_dyads(level)
    i, j = dyads[int(rng.integers(dyads.shape[0]))]
    propose(state, statistics, values, level, int(i), int(j), rng)
    return state


class MetropolisHastingsChain:
    """
    A running chain: owns its network state, tracks the statistic vector
    incrementally and counts acceptances.
    """

    def __init__(
        self,
        start: MultilevelNetwork,
        statistics: Sequence[Statistic],
        theta: ThetaLike,
        free_levels: Sequence[TieLevel],
        level_choice: Optional[Dict[TieLevel, float]] = None,
        seed: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
    ):
        self.net = start.copy()
        self.statistics = list(statistics)
        self.theta = theta_array(theta, len(self.statistics))
        self.rng = rng if rng is not None else np.random.default_rng(resolve_seed(seed))
        self.levels, self.cumulative = proposal_levels(self.net, free_levels, level_choice)
        self._dyads = [self.net.toggleable_dyads(level) for level in self.levels]
        self.z = evaluate(self.net, self.statistics)
        self.steps = 0
        self.accepted = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.steps if self.steps else 0.0

    def set_theta(self, theta: ThetaLike) -> None:
        self.theta = theta_array(theta, len(self.statistics))

    def step(self) -> bool:
        rng = self.rng
        k = 0 if len(self.levels) == 1 else int(np.searchsorted(self.cumulative, rng.random(), side="right"))
        dyads = self._dyads[k]
        i, j = dyads[int(rng.integers(dyads.shape[0]))]
        delta = propose(self.net, self.statistics, self.theta, self.levels[k], int(i), int(j), rng)
        self.steps += 1
        if delta is None:
            return False
        self.z += delta
        self.accepted += 1
        return True

    def run(self, n_steps: int) -> np.ndarray:
        """Advance ``n_steps`` steps and return the current statistic vector."""
        for _ in range(n_steps):
            self.step()
        return self.z

    def resync(self) -> np.ndarray:
        """Recompute the statistic vector from scratch."""
        self.z = evaluate(self.net, self.statistics)
        return self.z


def degenerate_statistics(draws: np.ndarray, names: Sequence[str]) -> List[str]:
    """Statistics whose retained path is monotone and non-constant over the final half of the draws."""
    if draws.shape[0] < MIN_DEGENERACY_DRAWS:
        return []
    tail = draws[draws.shape[0] // 2:]
    steps = np.diff(tail, axis=0)
    flagged = []
    for k, name in enumerate(names):
        column = steps[:, k]
        if np.all(column == 0):
            continue
        if np.all(column >= 0) or np.all(column <= 0):
            flagged.append(name)
    return flagged


def summarize(
    draws: np.ndarray,
    names: Sequence[str],
    n_steps: int,
    acceptance_rate: float,
    final_state: Optional[MultilevelNetwork] = None,
) -> SampleSummary:
    n = draws.shape[0]
    sd = draws.std(axis=0, ddof=1) if n > 1 else np.zeros(draws.shape[1])
    flagged = degenerate_statistics(draws, names)
    if flagged:
        logger.warning(f"Possible degeneracy: monotone trend in {', '.join(flagged)}")
    return SampleSummary(
        statistics=list(names),
        mean=draws.mean(axis=0).tolist(),
        sd=sd.tolist(),
        n_draws=n,
        n_steps=n_steps,
        acceptance_rate=acceptance_rate,
        degenerate=bool(flagged),
        degenerate_statistics=flagged,
        draws=draws,
        final_state=final_state,
    )


def simulate_sample(
    start: MultilevelNetwork,
    theta: ThetaLike,
    model: ModelSpec,
    cfg: ChainConfig,
    on_draw: Optional[DrawCallback] = None,
) -> SampleSummary:
    """
    Run ``burn_in`` steps, then retain ``sample_size`` draws spaced by
    ``thinning`` steps. ``on_draw`` sees each retained network and must not
    modify it.
    """
    statistics = resolve_model(model, start)
    chain = MetropolisHastingsChain(
        start, statistics, theta, model.free_levels, level_choice=cfg.level_choice, seed=resolve_seed(cfg.seed)
    )
    logger.debug(f"Simulating: burn-in {cfg.burn_in}, {cfg.sample_size} draws every {cfg.thinning} steps")
    chain.run(cfg.burn_in)
    draws = np.empty((cfg.sample_size, len(statistics)), dtype=float)
    for k in range(cfg.sample_size):
        draws[k] = chain.run(cfg.thinning)
        if on_draw is not None:
            on_draw(chain.net)
    return summarize(draws, [s.label for s in statistics], chain.steps, chain.acceptance_rate, chain.net)


def _run_chain(args: Tuple[MultilevelNetwork, List[float], ModelSpec, ChainConfig]) -> SampleSummary:
    start, theta, model, cfg = args
    return simulate_sample(start, theta, model, cfg)


def simulate_chains(
    start: MultilevelNetwork,
    theta: ThetaLike,
    model: ModelSpec,
    cfg: ChainConfig,
    n_chains: int = 1,
    processes: Optional[int] = None,
) -> SampleSummary:
    """
    Independent chains with seeds spawned from ``cfg.seed``, merged into one
    summary. With ``processes`` the chains run in a process pool.
    """
    if n_chains < 1:
        raise SamplerError("n_chains must be at least 1")
    values = theta.values if isinstance(theta, Theta) else [float(v) for v in theta]
    jobs = [(start, values, model, cfg.model_copy(update={"seed": seed})) for seed in derive_seeds(cfg.seed, n_chains)]
    if processes and n_chains > 1:
        with ProcessPoolExecutor(max_workers=processes) as pool:
            summaries = list(pool.map(_run_chain, jobs))
    else:
        summaries = [_run_chain(job) for job in jobs]

    draws = np.vstack([s.draws for s in summaries])
    n_steps = sum(s.n_steps for s in summaries)
    accepted = sum(s.acceptance_rate * s.n_steps for s in summaries)
    merged = summarize(draws, summaries[0].statistics, n_steps, accepted / n_steps if n_steps else 0.0,
                       summaries[0].final_state)
    flagged = sorted({name for s in summaries for name in s.degenerate_statistics})
    return merged.model_copy(update={"degenerate": bool(flagged), "degenerate_statistics": flagged})
