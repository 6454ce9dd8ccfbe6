import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.theme import Theme

from ..core.config import OUTPUT_DIR_ENV, Config, default_output_dir, load_section
from ..core.errors import ConfigError, MergmError
from ..core.models import ChainConfig, EstimationSettings, ModelSpec, RunConfig, RunMode
from ..core.workbench import EXIT_ERROR, EXIT_NOT_CONVERGED, Workbench, error_report
from ..export import get_exporter
from ..export.text_exporter import render_table
from ..statistics import list_statistics
from ..utils.logger import get_logger, setup_logger

# Initialize logger first with default settings
setup_logger(level="WARNING")
logger = get_logger()

# Setup custom theme and console
theme = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "red",
    "success": "green",
    "command": "magenta",
    "highlight": "bold blue"
})

console = Console(theme=theme)


def print_error(message: str):
    """Print error message in red with X symbol."""
    console.print(f"❌ Error: {message}", style="error")


def print_warning(message: str):
    """Print warning message in yellow with ! symbol."""
    console.print(f"⚠️  Warning: {message}", style="warning")


def print_success(message: str):
    """Print success message in green with ✓ symbol."""
    console.print(f"✅ {message}", style="success")


class RichGroup(click.Group):
    def format_help(self, ctx, formatter):
        console.print(Panel.fit(
            "Multilevel ERGMs for actors, objects and the ties between them",
            title="[bold cyan]mergmkit[/bold cyan]",
            border_style="cyan"
        ))

        commands_table = Table(show_header=True, header_style="bold cyan", border_style="cyan")
        commands_table.add_column("Command", style="magenta")
        commands_table.add_column("Description")
        for cmd_name, cmd in self.commands.items():
            commands_table.add_row(cmd_name, cmd.get_short_help_str())

        console.print("\n[bold cyan]Commands:[/bold cyan]")
        console.print(commands_table)

        console.print("\n[bold cyan]Examples:[/bold cyan]")
        console.print("""
• Describe the groups of a dataset:
  [magenta]mergmkit describe --nodes nodes.csv --edges edges.csv[/magenta]

• Estimate a model and check its fit:
  [magenta]mergmkit estimate --nodes nodes.csv --edges edges.csv --model model.json --seed 1[/magenta]
  [magenta]mergmkit gof --nodes nodes.csv --edges edges.csv --fit mergm_output/fit.json[/magenta]

• Lagged design (wave-1 social ties fixed):
  [magenta]mergmkit estimate --nodes nodes.csv --edges edges.csv --model model.json --lagged[/magenta]
""")


def data_options(func: Callable) -> Callable:
    """Options shared by every analysis command."""
    options = [
        click.option('--nodes', type=click.Path(path_type=Path), help='Node CSV (id, level, group, attributes...)'),
        click.option('--edges', type=click.Path(path_type=Path), help='Edge CSV (level, from, to[, wave])'),
        click.option('--nodes2', type=click.Path(path_type=Path), help='Node CSV of the second wave'),
        click.option('--edges2', type=click.Path(path_type=Path), help='Edge CSV of the second wave'),
        click.option('--model', 'model_path', type=click.Path(path_type=Path), help='Model JSON (stats, free_levels, aliases)'),
        click.option('--chain', 'chain_path', type=click.Path(path_type=Path), help='Chain settings JSON (burn_in, thinning, sample_size)'),
        click.option('--estimation', 'estimation_path', type=click.Path(path_type=Path), help='Estimation settings JSON'),
        click.option('--config', 'config_path', type=click.Path(path_type=Path), help='Combined run document; flags override it'),
        click.option('--seed', type=int, help='Top-level random seed'),
        click.option('--out', 'output_dir', envvar=OUTPUT_DIR_ENV, type=click.Path(path_type=Path),
                     help=f'Output directory (default: ${OUTPUT_DIR_ENV} or ./mergm_output)'),
        click.option('--min-usage-filter', is_flag=True, help='Drop objects used by fewer than --min-usage actors'),
        click.option('--min-usage', type=int, default=2, show_default=True, help='Minimum number of users per object'),
        click.option('--lagged', is_flag=True, help='Wave-1 social ties fixed, wave-2 usage and material ties free'),
        click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def parse_theta(raw: Optional[str]) -> Optional[List[float]]:
    """``--theta`` as a JSON list, e.g. ``'[-1.2, 0.4]'``."""
    if raw is None:
        return None
    try:
        values = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"--theta is not a JSON list: {e}") from e
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        raise ConfigError("--theta must be a JSON list of numbers")
    return [float(v) for v in values]


def build_run_config(mode: RunMode, options: Dict[str, Any]) -> RunConfig:
    """Merge the run document with the command-line flags (flags win)."""
    document = Config(options.get("config_path"))
    model = load_section(options["model_path"], ModelSpec) if options.get("model_path") else document.model_spec()
    chain = load_section(options["chain_path"], ChainConfig) if options.get("chain_path") else document.chain_config()
    estimation = (
        load_section(options["estimation_path"], EstimationSettings)
        if options.get("estimation_path") else document.estimation_settings()
    )
    modeled, auxiliary = document.gof_thresholds()
    try:
        return RunConfig(
            mode=mode,
            nodes=options.get("nodes"),
            edges=options.get("edges"),
            nodes2=options.get("nodes2"),
            edges2=options.get("edges2"),
            model=model,
            chain=chain,
            estimation=estimation,
            output_dir=options.get("output_dir") or default_output_dir(),
            seed=options.get("seed"),
            min_usage_filter=options.get("min_usage_filter", False),
            min_usage=options.get("min_usage", 2),
            lagged=options.get("lagged", False),
            fit_path=options.get("fit_path"),
            theta=parse_theta(options.get("theta")),
            from_empty=options.get("from_empty", False),
            chains=options.get("chains", 1),
            processes=options.get("processes"),
            aux=document.aux_statistics(),
            modeled_threshold=modeled,
            auxiliary_threshold=auxiliary,
            descriptives=document.descriptive_options(),
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e}") from e


def report_error(error: MergmError, mode: RunMode, output_dir: Optional[Path]) -> None:
    """error.json for failures raised before the workbench takes over."""
    try:
        get_exporter("json", output_dir=output_dir or default_output_dir()).export(error_report(error, mode), "error.json")
    except OSError as e:
        logger.error(f"Could not write error.json: {e}")


def execute(mode: RunMode, options: Dict[str, Any]) -> int:
    """Run one mode from parsed command-line options and return the exit status."""
    if options.get("verbose"):
        setup_logger(level="DEBUG")
        logger.info("Verbose logging enabled")

    try:
        cfg = build_run_config(mode, options)
    except MergmError as e:
        logger.error(f"Configuration failed: {e.message}")
        print_error(e.message)
        report_error(e, mode, options.get("output_dir"))
        return EXIT_ERROR

    workbench = Workbench(cfg)
    with console.status(f"[bold blue]Running {mode.value}..."):
        status = workbench.run()

    if workbench.error is not None:
        print_error(workbench.error.message)
        console.print(f"Details written to [bold]{cfg.output_dir / 'error.json'}[/bold]")
        return status

    for table in workbench.tables:
        console.print(render_table(table))
    if status == EXIT_NOT_CONVERGED:
        print_warning("Estimation did not converge; the partial fit was written")
    else:
        print_success(f"{mode.value} finished; {len(workbench.artifacts)} file(s) written to {cfg.output_dir}")
    return status


@click.group(cls=RichGroup)
def cli():
    """
    mergmkit: multilevel exponential random graph models

    Count statistics, simulate, estimate and check the fit of models
    over actor-actor, object-object and actor-object ties.
    """
    pass


@cli.command()
def statistics():
    """List the statistics that models may reference."""
    table = Table(show_header=True, header_style="bold")
    table.add_column("Statistic", style="cyan")
    table.add_column("Level", style="green")
    table.add_column("Description")
    for name, cls in list_statistics().items():
        table.add_row(name, cls.level.value, cls.description or "")
    console.print(table)


@cli.command()
@data_options
@click.pass_context
def describe(ctx, **options):
    """Per-group descriptive statistics (densities, centralization, attributes)."""
    ctx.exit(execute(RunMode.DESCRIBE, options))


@cli.command()
@data_options
@click.pass_context
def stats(ctx, **options):
    """Observed values of the model statistics."""
    ctx.exit(execute(RunMode.STATS, options))


@cli.command()
@data_options
@click.option('--fit', 'fit_path', type=click.Path(path_type=Path), help='fit.json whose model and estimates to use')
@click.option('--theta', help='Parameters as a JSON list, aligned with the model')
@click.option('--chains', type=int, default=1, show_default=True, help='Independent chains, seeded from --seed and merged')
@click.option('--processes', type=int, help='Run the chains in this many worker processes')
@click.option('--from-empty', is_flag=True, help='Start the chain from the empty network')
@click.pass_context
def simulate(ctx, **options):
    """Sample networks from a model at fixed parameters."""
    ctx.exit(execute(RunMode.SIMULATE, options))


@cli.command()
@data_options
@click.pass_context
def estimate(ctx, **options):
    """Estimate model parameters by stochastic approximation (exit 2 if not converged)."""
    ctx.exit(execute(RunMode.ESTIMATE, options))


@cli.command()
@data_options
@click.option('--fit', 'fit_path', type=click.Path(path_type=Path), help='fit.json written by estimate')
@click.option('--from-empty', is_flag=True, help='Start the chain from the empty network')
@click.pass_context
def gof(ctx, **options):
    """Goodness of fit of modeled and auxiliary statistics."""
    ctx.exit(execute(RunMode.GOF, options))


@cli.command()
@click.option('--fit', 'fit_path', type=click.Path(path_type=Path), help='fit.json written by estimate')
@click.option('--out', 'output_dir', envvar=OUTPUT_DIR_ENV, type=click.Path(path_type=Path), help='Output directory')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.pass_context
def correlate(ctx, **options):
    """Correlations between the estimates of a fit."""
    ctx.exit(execute(RunMode.CORRELATE, options))


def main():
    """Main entry point for the CLI."""
    try:
        logger.debug("Starting mergmkit CLI")
        cli()
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        print_error(f"Unexpected error: {str(e)}")
        sys.exit(EXIT_ERROR)


if __name__ == '__main__':
    main()
