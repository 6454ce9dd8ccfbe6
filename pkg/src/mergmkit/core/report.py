# mergmkit/core/report.py
"""
Turning results into report rows: fit tables with significance stars,
GOF tables, estimate correlations, descriptives and statistic vectors.
"""

import re
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.stats import norm

from ..statistics import CATALOG
from .descriptives import NETWORK_METRICS
from .estimator import correlation_rows
from .models import (
    DescriptiveReport,
    FitReport,
    FitReportRow,
    FitResult,
    GofTable,
    ReportTable,
    SampleSummary,
    StatLevel,
)

SECTIONS: Dict[StatLevel, str] = {
    StatLevel.A: "Social",
    StatLevel.B: "Material",
    StatLevel.X: "Object usage",
    StatLevel.CROSS: "Socio-material",
}
SECTION_ORDER = list(SECTIONS.values())

# (critical |z|, stars), most significant first; a boundary value takes the more significant bucket
STAR_THRESHOLDS = [(round(float(norm.isf(alpha / 2.0)), 3), stars) for alpha, stars in ((0.01, "***"), (0.05, "**"), (0.1, "*"))]

_LABEL = re.compile(r"^(?:[^_]+_)?(?P<id>[^()]+?)(?:\([^)]*\))?$")


def significance_stars(z: float) -> str:
    """Stars for a two-tailed normal test at the 0.1, 0.05 and 0.01 levels."""
    magnitude = abs(z)
    for critical, stars in STAR_THRESHOLDS:
        if magnitude >= critical:
            return stars
    return ""


def two_tailed_p(z: float) -> float:
    return float(2.0 * norm.sf(abs(z)))


def catalog_id(label: str) -> Optional[str]:
    """Catalog id behind a display label such as ``Gender_MatchA`` or ``ASA(3)``."""
    if label in CATALOG:
        return label
    match = _LABEL.match(label)
    if match and match.group("id") in CATALOG:
        return match.group("id")
    return None


def _pattern(fit: FitResult, k: int) -> Dict[str, object]:
    if fit.model is not None and k < len(fit.model.stats):
        desc = fit.model.stats[k]
        cls = CATALOG.get(desc.id)
    else:
        name = catalog_id(fit.statistics[k])
        cls = CATALOG.get(name) if name else None
    if cls is None:
        return {"section": SECTIONS[StatLevel.CROSS], "description": fit.statistics[k]}
    return {"section": SECTIONS[cls.level], "description": cls.description or cls.name}


def render_fit_report(
    fit: FitResult,
    labels: Optional[Dict[str, str]] = None,
    title: str = "Results of MERGMs",
) -> FitReport:
    """
    Wald ratios, two-tailed normal p-values and stars for every parameter.
    Rows are grouped into the Social, Material, Object usage and
    Socio-material sections, keeping model order within a section.
    """
    labels = labels or {}
    rows = []
    for k, name in enumerate(fit.statistics):
        pattern = _pattern(fit, k)
        theta, se = fit.theta_hat[k], fit.std_errors[k]
        row = FitReportRow(
            statistic=name,
            label=labels.get(name, str(pattern["description"])),
            section=str(pattern["section"]),
            parameter=theta,
            std_error=se,
        )
        if se > 0:
            z = theta / se
            row.z = z
            row.p_value = two_tailed_p(z)
            row.stars = significance_stars(z)
        else:
            row.flag = "zero standard error"
        rows.append(row)
    rows.sort(key=lambda r: SECTION_ORDER.index(r.section))
    return FitReport(title=title, rows=rows, converged=fit.converged)


def fit_table(fit: FitResult) -> ReportTable:
    """Machine-readable estimates."""
    return ReportTable(
        name="fit",
        title="Parameter estimates",
        columns=["statistic", "parameter", "std_error", "conv_t_ratio"],
        rows=[
            [name, theta, se, t]
            for name, theta, se, t in zip(fit.statistics, fit.theta_hat, fit.std_errors, fit.conv_t_ratios)
        ],
        notes=[] if fit.converged else ["Estimation did not converge"],
    )


def fit_report_table(report: FitReport) -> ReportTable:
    """Human-readable table with sections and stars."""
    rows = []
    for row in report.rows:
        rows.append([
            row.section,
            row.label,
            row.statistic,
            f"{row.parameter:.4f}{row.stars}",
            f"({row.std_error:.4f})",
        ])
    notes = ["Two-tailed tests; *p<0.1; **p<0.05; ***p<0.01"]
    flagged = [row.statistic for row in report.rows if row.flag]
    if flagged:
        notes.append(f"No stars for zero standard error: {', '.join(flagged)}")
    if not report.converged:
        notes.append("Estimation did not converge; estimates are provisional")
    return ReportTable(
        name="fit_report",
        title=report.title,
        columns=["Section", "Pattern", "Statistic", "Parameter", "SD"],
        rows=rows,
        notes=notes,
    )


def gof_report_table(table: GofTable) -> ReportTable:
    return ReportTable(
        name="gof",
        title="Goodness of fit",
        columns=["statistic", "observed", "mean", "sd", "t_ratio", "modeled", "verdict"],
        rows=[
            [r.statistic, r.observed, r.sim_mean, r.sim_sd, r.t_ratio, r.modeled, r.verdict]
            for r in table.rows
        ],
        notes=[
            f"Thresholds: |t| <= {table.modeled_threshold:g} for modeled and "
            f"|t| <= {table.auxiliary_threshold:g} for other statistics"
        ] + [f"{r.statistic}: zero simulated variance" for r in table.rows if r.zero_variance],
    )


def correlation_table(fit: FitResult) -> ReportTable:
    """Lower-triangular correlations between the estimates."""
    rows = []
    for name, values in zip(fit.statistics, correlation_rows(fit)):
        rows.append([name] + [round(v, 4) if v is not None else "" for v in values])
    return ReportTable(
        name="correlations",
        title="Correlations between the estimates",
        columns=[""] + list(fit.statistics),
        rows=rows,
    )


def descriptive_table(report: DescriptiveReport) -> ReportTable:
    group_names = [g.group for g in report.groups]
    metrics = report.metrics or [(key, section, label) for key, section, label, _ in NETWORK_METRICS]
    aggregates = {(row.section, row.metric): row for row in report.aggregates}
    rows = []
    for key, section, label in metrics:
        agg = aggregates.get((section, label))
        rows.append(
            [section, label]
            + [g.values.get(key) for g in report.groups]
            + ([agg.average, agg.minimum, agg.maximum, agg.total] if agg else [None] * 4)
        )
    return ReportTable(
        name="descriptives",
        title="Descriptive statistics per group",
        columns=["Section", "Metric"] + group_names + ["Average", "Min", "Max", "Total"],
        rows=rows,
        notes=["Diversity is the Blau index normalized to [0, 1]; centralization is Freeman degree centralization"],
    )


def statistics_table(names: Sequence[str], values: Sequence[float]) -> ReportTable:
    return ReportTable(
        name="statistics",
        title="Observed statistics",
        columns=["statistic", "value"],
        rows=[[name, float(value)] for name, value in zip(names, values)],
    )


def simulation_table(summary: SampleSummary) -> ReportTable:
    notes = [f"{summary.n_draws} draws, {summary.n_steps} steps, acceptance rate {summary.acceptance_rate:.4f}"]
    if summary.degenerate:
        notes.append(f"Possible degeneracy in: {', '.join(summary.degenerate_statistics)}")
    return ReportTable(
        name="simulation",
        title="Simulated statistics",
        columns=["statistic", "mean", "sd"],
        rows=[[name, m, s] for name, m, s in zip(summary.statistics, summary.mean, summary.sd)],
        notes=notes,
    )


def draws_table(summary: SampleSummary) -> ReportTable:
    draws = summary.draws if summary.draws is not None else np.zeros((0, len(summary.statistics)))
    return ReportTable(
        name="draws",
        title="Retained draws",
        columns=["draw"] + list(summary.statistics),
        rows=[[k + 1] + row.tolist() for k, row in enumerate(draws)],
    )
