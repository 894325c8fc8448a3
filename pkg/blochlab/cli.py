"""
Command-line interface for blochlab.

Usage:
    python main.py analyze --u "1" --phi "z" --nmax 100
    python main.py analyze-cphi --phi "(z + 0.3)/(1 + 0.3*z)"
    python main.py norms --f "exp(z)" --weight wlog
    python main.py sequence --u "z" --phi "z/2" --csv ratios.csv
    python main.py verify all --anchors geometric:20
"""

import sys
from contextlib import contextmanager
from dataclasses import replace
from typing import Optional

import click
from loguru import logger

from exporters import ConsoleTable, CsvTableWriter, JsonReportWriter
from exporters.json_report import dumps, write_text

from . import __version__
from .analytic import make_pair, parse
from .analyzer import analyze_pair
from .config import RunConfig, load_settings
from .constants import AnalysisSettings, DEFAULT_CONFIG_PATH, GridSpec, Verdict
from .errors import BlochLabError, DivergentOperatorError, SelfMapViolation, SingularityError
from .norms import bloch_norm, growth_bound_check, growth_norm, random_disk_points
from .operators import ratio_series
from .testfns import parse_anchor_spec
from .verification import SUITES, run_suite
from .weights import WEIGHTS, get_weight, weight_vlog
from .zygmund import cphi_analysis, zygmund_norm

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUSED = 2


class PairValidationError(BlochLabError):
    """The symbols could not be turned into a valid pair."""


@contextmanager
def exit_codes():
    """Map failures to exit statuses: 2 for refusals, 1 for anything else."""
    try:
        yield
    except (SelfMapViolation, PairValidationError, DivergentOperatorError) as e:
        logger.error(f"Refused: {e}")
        click.echo(f"Refused: {e}", err=True)
        sys.exit(EXIT_REFUSED)
    except (BlochLabError, ValueError, OSError) as e:
        logger.error(f"Error: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_ERROR)
    except Exception as e:
        logger.error(f"Unexpected error: {type(e).__name__}: {e}", exc_info=True)
        click.echo(f"Unexpected error: {type(e).__name__}: {e}", err=True)
        sys.exit(EXIT_ERROR)


def validated_pair(u_text: str, phi_text: str, grid: GridSpec):
    try:
        return make_pair(u_text, phi_text, grid)
    except SingularityError as e:
        raise PairValidationError(str(e)) from e


def merged_settings(base: AnalysisSettings, nmax: Optional[int], grid: Optional[str],
                    tol: Optional[float], threads: Optional[int]) -> AnalysisSettings:
    """CLI flags over loaded settings."""
    return replace(
        base,
        nmax=nmax if nmax is not None else base.nmax,
        grid=GridSpec.parse(grid) if grid else base.grid,
        tol=tol if tol is not None else base.tol,
        threads=threads if threads is not None else base.threads,
    )


def emit(text: str, path: Optional[str]) -> None:
    if path:
        write_text(path, text)
    else:
        click.echo(text, nl=False)


def numeric_options(func):
    func = click.option("--threads", type=int, default=None, help="Worker threads (default: BLOCHLAB_THREADS)")(func)
    func = click.option("--tol", type=float, default=None, help="Declared relative tolerance")(func)
    func = click.option("--grid", "grid", type=str, default=None, help="Polar grid RxA, e.g. 512x256")(func)
    func = click.option("--nmax", type=int, default=None, help="Largest n of the ratio series")(func)
    return func


@click.group()
@click.version_option(version=__version__, prog_name="blochlab")
@click.option("--config", "config_path", type=click.Path(), default=DEFAULT_CONFIG_PATH,
              help="YAML configuration file")
@click.pass_context
def cli(ctx, config_path):
    """Weighted composition operators on logarithmic Bloch and Zygmund spaces."""
    ctx.ensure_object(dict)
    ctx.obj["settings"] = load_settings(config_path)


def _run_config(ctx, command, u, phi, nmax, grid, tol, threads, out, csv_path) -> RunConfig:
    settings = merged_settings(ctx.obj["settings"], nmax, grid, tol, threads)
    return RunConfig(command, u, phi, settings, out, csv_path).validate()


def _write_report(report, config: RunConfig) -> None:
    text = JsonReportWriter(config.out_path).write(report)
    if not config.out_path:
        click.echo(text, nl=False)
    if config.csv_path:
        CsvTableWriter(config.csv_path).write(report.j_series, report.i_series)


@cli.command()
@click.option("--u", "u_text", required=True, help="Multiplier symbol u")
@click.option("--phi", "phi_text", required=True, help="Self-map phi of the disk")
@numeric_options
@click.option("--out", type=click.Path(), default=None, help="JSON report path (default: stdout)")
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="CSV ratio table path")
@click.pass_context
def analyze(ctx, u_text, phi_text, nmax, grid, tol, threads, out, csv_path):
    """Continuity verdict, essential-norm band and boundary quantities of W(u, phi)."""
    with exit_codes():
        config = _run_config(ctx, "analyze", u_text, phi_text, nmax, grid, tol, threads, out, csv_path)
        pair = validated_pair(u_text, phi_text, config.settings.grid)
        report = analyze_pair(pair, config.settings)
        _write_report(report, config)
        if report.verdict is Verdict.DIVERGENT:
            raise DivergentOperatorError(f"W(u = {pair.u.text}, phi = {pair.phi.text}) is not continuous")


@cli.command("analyze-cphi")
@click.option("--phi", "phi_text", required=True, help="Self-map phi of the disk")
@numeric_options
@click.option("--out", type=click.Path(), default=None, help="JSON report path (default: stdout)")
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="CSV ratio table path")
@click.pass_context
def analyze_cphi(ctx, phi_text, nmax, grid, tol, threads, out, csv_path):
    """C_phi on the Zygmund-log space, through W(phi', phi)."""
    with exit_codes():
        config = _run_config(ctx, "analyze-cphi", None, phi_text, nmax, grid, tol, threads, out, csv_path)
        try:
            report = cphi_analysis(phi_text, config.settings)
        except SingularityError as e:
            raise PairValidationError(str(e)) from e
        _write_report(report, config)
        if report.verdict is Verdict.DIVERGENT:
            raise DivergentOperatorError(f"C_phi with phi = {report.pair.phi.text} is not continuous")


@cli.command()
@click.option("--f", "f_text", required=True, help="Function to measure")
@click.option("--weight", "weight_id", type=click.Choice(sorted(WEIGHTS)), default="vlog", show_default=True)
@click.option("--grid", "grid", type=str, default=None, help="Polar grid RxA")
@click.option("--tol", type=float, default=None, help="Declared relative tolerance")
@click.option("--out", type=click.Path(), default=None, help="JSON path (default: stdout)")
@click.pass_context
def norms(ctx, f_text, weight_id, grid, tol, out):
    """Growth, Bloch and Zygmund norms of a function, with the point-evaluation bound."""
    with exit_codes():
        config = _run_config(ctx, "norms", None, None, None, grid, tol, None, out, None)
        settings = config.settings
        f = parse(f_text)
        weight = get_weight(weight_id)
        bloch = bloch_norm(weight, f, settings.grid)
        check = growth_bound_check(weight_vlog(), f, random_disk_points(1000),
                                   bloch if weight_id == "vlog" else None, settings.grid)

        def entry(value):
            return dict(value.to_dict(), tol=settings.tol)

        data = {
            "f": f.text,
            "weight": weight_id,
            "grid": str(settings.grid),
            "growth": entry(growth_norm(weight, f, settings.grid)),
            "bloch": entry(bloch),
            "zygmund": entry(zygmund_norm(weight, f, settings.grid)),
            "growth_bound": {
                "holds": check.holds,
                "norm": {"value": check.norm, "tol": settings.tol},
                "min_slack": check.min_slack,
                "witness": [check.witness.real, check.witness.imag] if check.witness is not None else None,
            },
        }
        emit(dumps(data), out)


@cli.command()
@click.option("--u", "u_text", required=True, help="Multiplier symbol u")
@click.option("--phi", "phi_text", required=True, help="Self-map phi of the disk")
@numeric_options
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="CSV path (default: stdout)")
@click.pass_context
def sequence(ctx, u_text, phi_text, nmax, grid, tol, threads, csv_path):
    """J- and I-ratio table of W(u, phi) as CSV."""
    with exit_codes():
        config = _run_config(ctx, "sequence", u_text, phi_text, nmax, grid, tol, threads, None, csv_path)
        settings = config.settings
        pair = validated_pair(u_text, phi_text, settings.grid)
        j_series, i_series = ratio_series(pair, settings.nmax, settings.grid, settings.threads)
        text = CsvTableWriter(csv_path).write(j_series, i_series)
        if not csv_path:
            click.echo(text, nl=False)


@cli.command()
@click.argument("suite", type=click.Choice(SUITES + ("all",)))
@click.option("--anchors", default="geometric:20", show_default=True, help="Test-function anchors")
@click.option("--grid", "grid", type=str, default=None, help="Polar grid RxA")
@click.option("--threads", type=int, default=None, help="Worker threads")
@click.option("--no-color", is_flag=True, help="Plain status column")
@click.pass_context
def verify(ctx, suite, anchors, grid, threads, no_color):
    """Run built-in verification suites and print a pass/fail table."""
    with exit_codes():
        config = _run_config(ctx, "verify", None, None, None, grid, None, threads, None, None)
        results = run_suite(suite, config.settings, parse_anchor_spec(anchors))
        ConsoleTable(color=not no_color).show(results)
        if not all(r.passed for r in results):
            sys.exit(EXIT_ERROR)
