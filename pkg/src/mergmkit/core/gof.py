# mergmkit/core/gof.py
"""Simulation-based goodness of fit."""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..statistics import evaluate, make_statistic, resolve_model
from ..utils.logger import get_logger
from .errors import GofError
from .models import ChainConfig, FitResult, GofRow, GofTable, ModelSpec, StatDescriptor
from .network import MultilevelNetwork
from .sampler import simulate_sample

logger = get_logger(__name__)

MODELED_THRESHOLD = 0.1
AUXILIARY_THRESHOLD = 1.0


def t_ratio(observed: float, mean: float, sd: float) -> Tuple[float, bool]:
    """(observed - mean) / sd, or (0, True) when sd is zero."""
    if sd <= 0:
        return 0.0, True
    return (observed - mean) / sd, False


def gof_row(statistic: str, observed: float, mean: float, sd: float, modeled: bool, threshold: float) -> GofRow:
    t, zero_variance = t_ratio(observed, mean, sd)
    return GofRow(
        statistic=statistic,
        observed=observed,
        sim_mean=mean,
        sim_sd=max(sd, 0.0),
        t_ratio=t,
        modeled=modeled,
        zero_variance=zero_variance,
        verdict="pass" if abs(t) <= threshold else "fail",
    )


def run_gof(
    obs: MultilevelNetwork,
    fit: FitResult,
    model: Optional[ModelSpec] = None,
    aux: Optional[Sequence[StatDescriptor]] = None,
    cfg: Optional[ChainConfig] = None,
    start: Optional[MultilevelNetwork] = None,
    modeled_threshold: float = MODELED_THRESHOLD,
    auxiliary_threshold: float = AUXILIARY_THRESHOLD,
) -> GofTable:
    """
    Simulate at the fitted parameters and compare modeled and auxiliary
    statistics with their observed values. Auxiliary statistics are evaluated
    on the retained draws only and never influence the chain.
    """
    model = model or fit.model
    if model is None:
        raise GofError("No model given and the fit does not carry one")
    cfg = cfg or ChainConfig()
    start = obs if start is None else start

    modeled = resolve_model(model, obs)
    if len(modeled) != len(fit.theta_hat):
        raise GofError(f"Fit has {len(fit.theta_hat)} parameters but the model has {len(modeled)} statistics")
    modeled_keys = {s.descriptor.key() for s in modeled}
    auxiliary = []
    for desc in aux or []:
        stat = make_statistic(desc)
        if stat.descriptor.key() not in modeled_keys:
            if stat.attribute:
                obs.attribute_codes(stat.attribute)
            auxiliary.append(stat)

    aux_draws: List[np.ndarray] = []
    summary = simulate_sample(
        start,
        fit.theta_hat,
        model,
        cfg,
        on_draw=(lambda net: aux_draws.append(evaluate(net, auxiliary))) if auxiliary else None,
    )
    if summary.n_draws == 0:
        raise GofError("Simulation produced no draws")
    logger.info(f"GOF sample: {summary.n_draws} draws, acceptance rate {summary.acceptance_rate:.3f}")

    rows = []
    z_obs = evaluate(obs, modeled)
    for stat, observed, mean, sd in zip(modeled, z_obs, summary.mean, summary.sd):
        rows.append(gof_row(stat.label, float(observed), mean, sd, True, modeled_threshold))
    if auxiliary:
        draws = np.array(aux_draws)
        sds = draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.zeros(len(auxiliary))
        for stat, observed, mean, sd in zip(auxiliary, evaluate(obs, auxiliary), draws.mean(axis=0), sds):
            rows.append(gof_row(stat.label, float(observed), float(mean), float(sd), False, auxiliary_threshold))

    table = GofTable(rows=rows, modeled_threshold=modeled_threshold, auxiliary_threshold=auxiliary_threshold)
    failing = table.failing_rows()
    if failing:
        logger.warning(f"{len(failing)} GOF row(s) outside threshold: {', '.join(r.statistic for r in failing)}")
    return table
