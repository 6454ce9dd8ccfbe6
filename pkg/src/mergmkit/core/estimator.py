# mergmkit/core/estimator.py
"""
Three-phase Robbins-Monro MCMC maximum-likelihood estimation.

Phase 1 estimates a scaling matrix from a short simulation at the starting
values. Phase 2 runs subphases of stochastic approximation updates with a
gain halved per subphase. Phase 3 simulates at the estimate to obtain
convergence t-ratios and standard errors.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..statistics import Statistic, canonical_model, change_vector, evaluate, resolve_model
from ..utils.logger import get_logger
from .errors import ConstantStatisticError, EstimationError, SingularCovarianceError, ZeroVarianceError
from .models import ChainConfig, EstimationSettings, FitResult, ModelSpec, TieLevel
from .network import MultilevelNetwork
from .sampler import MetropolisHastingsChain, resolve_seed

logger = get_logger(__name__)

EDGE_STATISTICS = {"EdgeA": TieLevel.A, "EdgeB": TieLevel.B, "XEdge": TieLevel.X}

# |correlation| above this is treated as collinear
COLLINEAR = 1.0 - 1e-8

# warm-start estimates beyond this are clipped
MPLE_BOUND = 10.0


def subphase_length(k: int, p: int) -> int:
    """Number of updates in subphase ``k`` (1-based) for ``p`` parameters."""
    return int(np.floor(2.0 ** (4.0 * (k - 1) / 3.0) * (7 + p)))


def logit_density(net: MultilevelNetwork, level: TieLevel) -> float:
    total = net.n_toggleable(level)
    if not total:
        return 0.0
    density = np.clip(net.edge_count(level) / total, 0.01, 0.99)
    return float(np.log(density / (1.0 - density)))


def initial_theta(obs: MultilevelNetwork, statistics: Sequence[Statistic], free_levels: Sequence[TieLevel]) -> np.ndarray:
    """Edge parameters of free levels at the logit of observed density, all others zero."""
    theta = np.zeros(len(statistics))
    for k, stat in enumerate(statistics):
        level = EDGE_STATISTICS.get(stat.name)
        if level is not None and level in free_levels:
            theta[k] = logit_density(obs, level)
    return theta


def pseudo_likelihood_theta(
    obs: MultilevelNetwork, statistics: Sequence[Statistic], free_levels: Sequence[TieLevel], start: np.ndarray
) -> np.ndarray:
    """Maximum pseudo-likelihood estimate, used only as a warm start."""
    work = obs.copy()
    rows, ties = [], []
    for level in free_levels:
        for i, j in work.toggleable_dyads(level):
            i, j = int(i), int(j)
            present = work.has_tie(level, i, j)
            if present:
                work.flip(level, i, j)
            rows.append(change_vector(work, level, i, j, statistics))
            if present:
                work.flip(level, i, j)
            ties.append(float(present))
    deltas, y = np.array(rows), np.array(ties)

    def objective(theta: np.ndarray) -> Tuple[float, np.ndarray]:
        eta = deltas @ theta
        prob = 0.5 * (1.0 + np.tanh(eta / 2.0))
        return float(np.sum(np.logaddexp(0.0, eta) - y * eta)), deltas.T @ (prob - y)

    result = optimize.minimize(objective, start, jac=True, method="BFGS")
    if not np.all(np.isfinite(result.x)):
        logger.warning("Pseudo-likelihood warm start diverged; keeping the default start")
        return start
    if np.any(np.abs(result.x) > MPLE_BOUND):
        logger.warning(f"Pseudo-likelihood estimate at the boundary; clipping to [-{MPLE_BOUND:g}, {MPLE_BOUND:g}]")
    return np.clip(result.x, -MPLE_BOUND, MPLE_BOUND)


def steps_per_draw(obs: MultilevelNetwork, model: ModelSpec, settings: EstimationSettings, cfg: ChainConfig) -> int:
    """
    Toggles between successive draws: ``multiplication_factor`` times the free
    dyad count when set, otherwise at least one sweep of the free dyads.
    """
    free = sum(obs.n_toggleable(level) for level in model.free_levels)
    if settings.multiplication_factor is None:
        return max(cfg.thinning, free)
    return max(1, int(round(settings.multiplication_factor * free)))


def collinear_pair(cov: np.ndarray, names: Sequence[str]) -> Optional[Tuple[str, str]]:
    """Statistic pair responsible for a singular covariance, if one can be named."""
    var = np.diag(cov)
    for k, v in enumerate(var):
        if v <= 0:
            return names[k], names[k]
    sd = np.sqrt(var)
    corr = cov / np.outer(sd, sd)
    np.fill_diagonal(corr, 0.0)
    if corr.size == 0:
        return None
    k, l = np.unravel_index(np.argmax(np.abs(corr)), corr.shape)
    if abs(corr[k, l]) >= COLLINEAR or np.linalg.matrix_rank(cov) < cov.shape[0]:
        return names[min(k, l)], names[max(k, l)]
    return None


class RobbinsMonroEstimator:
    """Runs the three phases on one chain; restarts reuse the chain and the last estimate."""

    def __init__(self, obs: MultilevelNetwork, model: ModelSpec, settings: EstimationSettings, cfg: ChainConfig):
        self.obs = obs
        self.model = canonical_model(model)
        self.settings = settings
        self.cfg = cfg
        self.statistics = resolve_model(self.model, obs)
        self.names = [s.label for s in self.statistics]
        self.z_obs = evaluate(obs, self.statistics)
        self.steps = steps_per_draw(obs, self.model, settings, cfg)
        self.seed = resolve_seed(cfg.seed)

    def _draws(self, chain: MetropolisHastingsChain, n: int) -> np.ndarray:
        draws = np.empty((n, len(self.statistics)))
        for k in range(n):
            draws[k] = chain.run(self.steps)
        return draws

    def phase1(self, chain: MetropolisHastingsChain) -> np.ndarray:
        """Inverse scaling matrix from a short simulation."""
        draws = self._draws(chain, self.settings.phase1_draws)
        var = draws.var(axis=0)
        constant = [name for name, v in zip(self.names, var) if v <= 0]
        if constant:
            raise ConstantStatisticError(
                f"Statistic(s) {', '.join(constant)} did not vary in phase 1; the model cannot be estimated",
                statistics=constant,
            )
        if self.settings.full_scaling and len(var) > 1:
            cov = np.cov(draws, rowvar=False)
            if np.linalg.matrix_rank(cov) == len(var):
                return np.linalg.inv(cov)
            logger.warning("Phase 1 covariance is singular; falling back to diagonal scaling")
        return np.diag(1.0 / var)

    def phase2(self, chain: MetropolisHastingsChain, theta: np.ndarray, scaling: np.ndarray) -> np.ndarray:
        gain = self.settings.initial_gain
        p = len(theta)
        for k in range(1, self.settings.subphase_count + 1):
            n_updates = subphase_length(k, p)
            total = np.zeros(p)
            for _ in range(n_updates):
                z = chain.run(self.steps)
                theta = theta - gain * scaling @ (z - self.z_obs)
                if not np.all(np.isfinite(theta)):
                    raise EstimationError("Parameter updates diverged in phase 2", subphase=k)
                chain.set_theta(theta)
                total += theta
            theta = total / n_updates
            chain.set_theta(theta)
            chain.resync()
            logger.debug(f"Subphase {k}: {n_updates} updates, gain {gain:g}, theta {np.round(theta, 4).tolist()}")
            gain /= 2.0
        return theta

    def phase3(self, chain: MetropolisHastingsChain) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        draws = self._draws(chain, self.settings.phase3_draws)
        mean = draws.mean(axis=0)
        sd = draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.zeros(len(mean))
        t_ratios = np.divide(mean - self.z_obs, sd, out=np.zeros_like(mean), where=sd > 0)
        cov = np.atleast_2d(np.cov(draws, rowvar=False)) if draws.shape[0] > 1 else np.zeros((len(mean), len(mean)))
        pair = collinear_pair(cov, self.names)
        if pair is not None:
            raise SingularCovarianceError(
                f"Phase 3 statistic covariance is singular (statistics {pair[0]} and {pair[1]})", pair=pair
            )
        try:
            param_cov = np.linalg.inv(cov)
        except np.linalg.LinAlgError as e:
            raise SingularCovarianceError(f"Phase 3 statistic covariance is singular: {e}") from e
        param_cov = (param_cov + param_cov.T) / 2.0
        return mean, sd, t_ratios, param_cov

    def run(self, start_theta: Optional[np.ndarray] = None) -> FitResult:
        theta0 = initial_theta(self.obs, self.statistics, self.model.free_levels)
        if self.settings.mple_warm_start:
            theta0 = pseudo_likelihood_theta(self.obs, self.statistics, self.model.free_levels, theta0)
        if start_theta is not None:
            theta0 = np.asarray(start_theta, dtype=float)
        logger.info(f"Estimating {len(self.statistics)} parameters; initial theta {np.round(theta0, 4).tolist()}")

        chain = MetropolisHastingsChain(
            self.obs, self.statistics, theta0, self.model.free_levels,
            level_choice=self.cfg.level_choice, seed=self.seed,
        )
        chain.run(self.cfg.burn_in)
        theta = theta0
        restarts = 0
        while True:
            chain.set_theta(theta)
            scaling = self.phase1(chain)
            theta = self.phase2(chain, theta, scaling)
            mean, sd, t_ratios, param_cov = self.phase3(chain)
            converged = bool(np.all(np.abs(t_ratios) <= self.settings.convergence_threshold))
            logger.info(
                f"Run {restarts + 1}: max |t| = {np.max(np.abs(t_ratios)):.4f}"
                f" ({'converged' if converged else 'not converged'})"
            )
            if converged or restarts >= self.settings.max_restarts:
                break
            restarts += 1

        if not converged:
            logger.warning(f"Estimation did not converge after {restarts} restart(s)")
        std_errors = np.sqrt(np.clip(np.diag(param_cov), 0.0, None))
        return FitResult(
            statistics=self.names,
            theta_hat=theta.tolist(),
            std_errors=std_errors.tolist(),
            conv_t_ratios=t_ratios.tolist(),
            param_covariance=param_cov.tolist(),
            converged=converged,
            observed_stats=self.z_obs.tolist(),
            initial_theta=theta0.tolist(),
            restarts=restarts,
            phase3_mean=mean.tolist(),
            phase3_sd=sd.tolist(),
            model=self.model,
        )


def estimate(
    obs: MultilevelNetwork,
    model: ModelSpec,
    settings: Optional[EstimationSettings] = None,
    cfg: Optional[ChainConfig] = None,
    start_theta: Optional[Sequence[float]] = None,
) -> FitResult:
    """
    Fit ``model`` to the observed network.

    Raises:
        ConstantStatisticError: a statistic does not vary at the starting values
        SingularCovarianceError: the phase-3 covariance cannot be inverted

    Non-convergence is reported through ``FitResult.converged``.
    """
    estimator = RobbinsMonroEstimator(obs, model, settings or EstimationSettings(), cfg or ChainConfig())
    return estimator.run(None if start_theta is None else np.asarray(start_theta, dtype=float))


def estimate_correlations(fit: FitResult) -> np.ndarray:
    """Correlation matrix of the parameter estimates."""
    cov = np.asarray(fit.param_covariance, dtype=float)
    var = np.diag(cov)
    if np.any(var <= 0):
        zero = [name for name, v in zip(fit.statistics, var) if v <= 0]
        raise ZeroVarianceError(f"Zero variance for estimate(s): {', '.join(zero)}", statistics=zero)
    sd = np.sqrt(var)
    corr = np.clip(cov / np.outer(sd, sd), -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def correlation_rows(fit: FitResult) -> List[List[Optional[float]]]:
    """Lower-triangular rows of the correlation matrix; entries above the diagonal are None."""
    corr = estimate_correlations(fit)
    p = corr.shape[0]
    return [[float(corr[k, l]) if l <= k else None for l in range(p)] for k in range(p)]
