# mergmkit/core/workbench.py
"""
Mode dispatch behind the command line: load data, run one analysis and
write its artifacts to the output directory.
"""

from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from ..export import get_exporter
from ..statistics import default_gof_statistics, evaluate, resolve_model
from ..utils.logger import get_logger
from .config import read_json
from .dataset import LoadedDataset, load_dataset
from .descriptives import describe
from .errors import ConfigError, MergmError
from .estimator import estimate
from .gof import run_gof
from .models import ChainConfig, FitResult, ModelSpec, ReportTable, RunConfig, RunMode
from .report import (
    correlation_table,
    descriptive_table,
    draws_table,
    fit_report_table,
    fit_table,
    gof_report_table,
    render_fit_report,
    simulation_table,
    statistics_table,
)
from .sampler import simulate_chains, simulate_sample

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 2


def error_report(error: MergmError, mode: RunMode) -> Dict[str, Any]:
    """Contents of error.json."""
    info = error.to_dict()
    return {"error": info["error"], "message": info["message"], "mode": mode.value, "details": info["details"]}


def load_fit(path: Path) -> FitResult:
    try:
        return FitResult.model_validate(read_json(path))
    except ValidationError as e:
        raise ConfigError(f"{path} is not a valid fit: {e}", path=str(path)) from e


class Workbench:
    """Runs one mode of a RunConfig and records the files it wrote."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.output_dir = Path(cfg.output_dir)
        self.csv = get_exporter("csv", output_dir=self.output_dir)
        self.text = get_exporter("text", output_dir=self.output_dir)
        self.json = get_exporter("json", output_dir=self.output_dir)
        self.artifacts: List[Path] = []
        self.tables: List[ReportTable] = []
        self.error: Optional[MergmError] = None
        self._dataset: Optional[LoadedDataset] = None

    # -- helpers --------------------------------------------------------------

    @property
    def chain(self) -> ChainConfig:
        if self.cfg.seed is None:
            return self.cfg.chain
        return self.cfg.chain.model_copy(update={"seed": self.cfg.seed})

    @property
    def dataset(self) -> LoadedDataset:
        if self._dataset is None:
            self._dataset = load_dataset(self.cfg)
            self.artifacts.append(self.json.export(self._dataset.summary, "ingestion.json"))
        return self._dataset

    def model(self, fit: Optional[FitResult] = None) -> ModelSpec:
        model = self.cfg.model or (fit.model if fit is not None else None)
        if model is None:
            raise ConfigError(f"Mode '{self.cfg.mode.value}' needs a model (--model, --config or a fit carrying one)")
        if self.dataset.free_levels is not None:
            model = model.with_free_levels(self.dataset.free_levels)
        return model

    def fit(self) -> FitResult:
        if self.cfg.fit_path is None:
            raise ConfigError(f"Mode '{self.cfg.mode.value}' needs --fit")
        return load_fit(self.cfg.fit_path)

    def write(self, table: ReportTable, text: bool = True, csv: bool = True) -> None:
        if csv:
            self.artifacts.append(self.csv.export(table))
        if text:
            self.tables.append(table)
            self.artifacts.append(self.text.export(table))

    # -- modes ----------------------------------------------------------------

    def stats(self) -> int:
        net = self.dataset.network
        statistics = resolve_model(self.model(), net)
        self.write(statistics_table([s.label for s in statistics], evaluate(net, statistics)))
        return EXIT_OK

    def describe(self) -> int:
        report = describe(self.dataset.groups, self.cfg.descriptives)
        self.write(descriptive_table(report))
        return EXIT_OK

    def simulate(self) -> int:
        fit = self.fit() if self.cfg.fit_path is not None else None
        model = self.model(fit)
        theta = self.cfg.theta if self.cfg.theta is not None else (fit.theta_hat if fit is not None else None)
        if theta is None:
            raise ConfigError("Mode 'simulate' needs --theta or --fit")
        net = self.dataset.network
        start = net.empty_like(model.free_levels) if self.cfg.from_empty else net
        if self.cfg.chains > 1:
            summary = simulate_chains(start, theta, model, self.chain, n_chains=self.cfg.chains,
                                      processes=self.cfg.processes)
        else:
            summary = simulate_sample(start, theta, model, self.chain)
        self.write(simulation_table(summary))
        self.write(draws_table(summary), text=False)
        return EXIT_OK

    def estimate(self) -> int:
        fit = estimate(self.dataset.network, self.model(), self.cfg.estimation, self.chain)
        self.artifacts.append(self.json.export(fit, "fit.json"))
        self.write(fit_table(fit), text=False)
        self.write(fit_report_table(render_fit_report(fit)))
        if not fit.converged:
            logger.warning("Estimation did not converge; partial fit written")
            return EXIT_NOT_CONVERGED
        return EXIT_OK

    def gof(self) -> int:
        fit = self.fit()
        net = self.dataset.network
        model = self.model(fit)
        aux = self.cfg.aux if self.cfg.aux is not None else default_gof_statistics(net)
        table = run_gof(
            net,
            fit,
            model=model,
            aux=aux,
            cfg=self.chain,
            start=net.empty_like(model.free_levels) if self.cfg.from_empty else None,
            modeled_threshold=self.cfg.modeled_threshold,
            auxiliary_threshold=self.cfg.auxiliary_threshold,
        )
        self.write(gof_report_table(table))
        return EXIT_OK

    def correlate(self) -> int:
        self.write(correlation_table(self.fit()))
        return EXIT_OK

    def run(self) -> int:
        """Run the configured mode; errors are reported in ``error.json`` and exit status 1."""
        handlers: Dict[RunMode, Callable[[], int]] = {
            RunMode.STATS: self.stats,
            RunMode.DESCRIBE: self.describe,
            RunMode.SIMULATE: self.simulate,
            RunMode.ESTIMATE: self.estimate,
            RunMode.GOF: self.gof,
            RunMode.CORRELATE: self.correlate,
        }
        logger.info(f"Running {self.cfg.mode.value}")
        try:
            status = handlers[self.cfg.mode]()
        except MergmError as e:
            logger.error(f"{self.cfg.mode.value} failed: {e.message}")
            self.error = e
            self.write_error(e)
            return EXIT_ERROR
        for path in self.artifacts:
            logger.info(f"Wrote {path}")
        return status

    def write_error(self, error: MergmError) -> Path:
        path = self.json.export(error_report(error, self.cfg.mode), "error.json")
        self.artifacts.append(path)
        return path


def run(mode: RunMode, cfg: RunConfig) -> int:
    """Run ``mode`` with ``cfg`` and return the process exit status."""
    if cfg.mode != mode:
        cfg = cfg.model_copy(update={"mode": RunMode(mode)})
    return Workbench(cfg).run()
