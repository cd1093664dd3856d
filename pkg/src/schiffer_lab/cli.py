"""Command-line front end: ``schiffer-lab <command>``.

Results are printed as structured text and written under the output
directory. Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.
"""
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from .config.settings import RunConfig, build_config, use_settings
from .lattice.soliton_check import rationality_test, soliton_breaking_experiment
from .models.periods import PeriodData
from .models.results import Characteristic
from .surfaces.abel_jacobi import abel_jacobi, aj_jet, hyperelliptic_test
from .surfaces.curve_model import parse_curve, point_from_text, weierstrass_points
from .surfaces.homology_periods import period_matrix
from .theta.theta_tools import even_characteristics, hyperelliptic_theta_test, theta_null
from .utils.exceptions import (
    EXIT_DOMAIN_ERROR,
    EXIT_OK,
    EXIT_USAGE_ERROR,
    LabError,
    get_exit_code,
    handle_exception_chain,
)
from .utils.logger import get_logger, setup_logging
from .utils.serialization import dump_structured, load_structured
from .variation.schiffer_engine import schiffer_series

logger = get_logger(__name__)


def _emit(ctx: click.Context, name: str, payload: dict) -> None:
    config: RunConfig = ctx.obj
    target = Path(config.output_dir) / f"{name}.json"
    click.echo(dump_structured(payload, target))


def _curve(path: str):
    return parse_curve(Path(path))


def _period_source(path: str):
    """A periods file (with "Pi") or a curve file, returning (name, PeriodData)"""
    data = load_structured(path)
    if isinstance(data, dict) and "Pi" in data:
        period = PeriodData.from_wire(data)
        return period.curve_name, period
    curve = _curve(path)
    return curve.name, period_matrix(curve)


def _characteristic(text: str, g: int) -> Characteristic:
    alpha, _, beta = text.partition(";")
    if len(alpha) != g or len(beta) != g or set(alpha + beta) - {"0", "1"}:
        raise click.BadParameter(f"expected two {g}-bit strings like '{'0' * g};{'1' * g}'",
                                 param_hint="--char")
    return Characteristic(alpha=tuple(map(int, alpha)), beta=tuple(map(int, beta)))


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Structured-text file mirroring RunConfig")
@click.option("--tol", type=float, help="Quadrature tolerance")
@click.option("--prec", type=int,
              help="Digits for branch-point refinement; above 15 also halves the theta vanishing "
                   "threshold. Quadrature and theta sums stay in float64")
@click.option("--seed", type=int, help="RNG seed for sampled points and corpora")
@click.option("--out", "output_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]), default=None)
@click.option("--json-logs", is_flag=True, default=None, help="Emit JSON log records")
@click.pass_context
def cli(ctx, config_path, tol, prec, seed, output_dir, log_level, json_logs):
    """Numerical laboratory for periods and Schiffer variations of hyperelliptic curves"""
    overrides = dict(quad_tol=tol, prec=prec, seed=seed, output_dir=output_dir,
                     log_level=log_level, log_json=json_logs)
    config = RunConfig.from_file(config_path, **overrides) if config_path else build_config(**overrides)
    use_settings(config)
    setup_logging(config.log_level, use_json=config.log_json)
    ctx.obj = config


@cli.group()
def curve():
    """Curve inspection"""


@curve.command("info")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def curve_info(ctx, curve_file):
    c = _curve(curve_file)
    payload = c.to_wire()
    payload["weierstrass_points"] = [w.to_wire() for w in weierstrass_points(c)]
    _emit(ctx, f"{c.name}-curve", payload)


@cli.command()
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def periods(ctx, curve_file):
    """Period matrix with its Riemann certificates"""
    c = _curve(curve_file)
    _emit(ctx, f"{c.name}-periods", period_matrix(c).to_wire())


@cli.command()
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--p0", "p0_text", required=True, help="Base point: 'x,+', 'x,-', 'branch:k'")
@click.option("--point", "point_text", required=True, help="Target point")
@click.option("--via", multiple=True, type=complex, help="Intermediate x-value (repeatable)")
@click.option("--cycle", "cycles", multiple=True, help="Append a cycle such as b1 or -a2 (repeatable)")
@click.option("--reduce", "reduce_", is_flag=True, help="Reduce modulo the period lattice")
@click.pass_context
def aj(ctx, curve_file, p0_text, point_text, via, cycles, reduce_):
    """Abel-Jacobi image of a point"""
    c = _curve(curve_file)
    value = abel_jacobi(c, period_matrix(c), point_from_text(p0_text), point_from_text(point_text),
                        via=via, cycles=cycles, reduce=reduce_)
    _emit(ctx, f"{c.name}-aj", value.to_wire())


@cli.command("aj-jet")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--point", "point_text", required=True)
@click.option("--order", type=click.IntRange(min=1), default=2, show_default=True)
@click.pass_context
def aj_jet_command(ctx, curve_file, point_text, order):
    """Derivatives of the Abel-Jacobi map at a point"""
    c = _curve(curve_file)
    jet = aj_jet(c, period_matrix(c), point_from_text(point_text), order)
    _emit(ctx, f"{c.name}-aj-jet", jet.to_wire())


@cli.command("hyper-test")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--point", "point_text", default=None, help="Anchor; all Weierstrass points when omitted")
@click.option("--threshold", type=float, default=None)
@click.pass_context
def hyper_test(ctx, curve_file, point_text, threshold):
    """Vanishing of the second Abel-Jacobi derivative"""
    c = _curve(curve_file)
    period = period_matrix(c)
    anchors = [point_from_text(point_text)] if point_text else weierstrass_points(c)
    verdicts = [hyperelliptic_test(c, period, anchor, threshold).to_wire() for anchor in anchors]
    _emit(ctx, f"{c.name}-hyper-test", {"verdicts": verdicts})


@cli.command()
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--point", "point_text", required=True, help="Variation point p0 (ordinary)")
@click.option("--order", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--jet-order", type=int, default=None)
@click.pass_context
def schiffer(ctx, curve_file, point_text, order, jet_order):
    """eps-expansion of the period matrix under a Schiffer variation"""
    c = _curve(curve_file)
    series = schiffer_series(c, period_matrix(c), point_from_text(point_text), order, jet_order)
    _emit(ctx, f"{c.name}-schiffer", series.to_wire())


@cli.command("theta-null")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--char", "char_text", default=None, help="Characteristic as 'alpha;beta' bit strings")
@click.pass_context
def theta_null_command(ctx, source, char_text):
    """Theta constants at a period matrix (all even ones by default)"""
    name, period = _period_source(source)
    chars = [_characteristic(char_text, period.genus)] if char_text else even_characteristics(period.genus)
    _emit(ctx, f"{name}-theta", {"constants": [theta_null(period.Pi, c).to_wire() for c in chars]})


@cli.command("hyper-theta-test")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def hyper_theta_test(ctx, source):
    """Even theta-null vanishing test (genus 1 to 3)"""
    name, period = _period_source(source)
    _emit(ctx, f"{name}-hyper-theta", hyperelliptic_theta_test(period.Pi).to_wire())


@cli.command("soliton-test")
@click.argument("curve_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--point", "point_text", required=True, help="Point p whose AJ tangent is tested")
@click.option("--p0", "p0_text", default=None, help="Variation point; runs the eps sweep when given")
@click.option("--eps", "eps", multiple=True, type=float, help="eps grid value (repeatable)")
@click.option("--rational-tol", type=float, default=None)
@click.option("--bound", type=int, default=None)
@click.pass_context
def soliton_test(ctx, curve_file, point_text, p0_text, eps, rational_tol, bound):
    """Rationality of the Abel-Jacobi tangent vector"""
    c = _curve(curve_file)
    period = period_matrix(c)
    p = point_from_text(point_text)
    U = aj_jet(c, period, p, 1).component(1)
    payload = {"U": rationality_test(U, period, rational_tol, bound).to_wire()}
    if p0_text:
        table = soliton_breaking_experiment(c, period, p, point_from_text(p0_text),
                                            eps_grid=list(eps) or None, tol=rational_tol, bound=bound)
        payload["sweep"] = table.to_wire()
    _emit(ctx, f"{c.name}-soliton", payload)


@cli.command()
@click.argument("name", type=click.Choice(["thm-4-2", "thm-5-5"]))
@click.option("--genus", type=int, default=None)
@click.option("--curves", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--points", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--instances", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--eps", "eps", multiple=True, type=float, help="eps grid value (repeatable)")
@click.pass_context
def experiment(ctx, name, genus, curves, points, instances, eps):
    """Seeded desk experiments writing a CSV and a structured summary"""
    from .experiments.runner import run_experiment

    config: RunConfig = ctx.obj
    context = {"genus": genus or (3 if name == "thm-4-2" else 2), "seed": config.seed, "curves": curves,
               "points": points, "instances": instances, "eps": list(eps) or None}
    table, (csv_path, summary_path) = run_experiment(name, context, config, Path(config.output_dir))
    click.echo(json.dumps({"csv": str(csv_path), "summary": table.summary}, indent=2, sort_keys=True))


@cli.command()
@click.pass_context
def selftest(ctx):
    """Run the invariant suite"""
    from .selftest import run_selftest

    results = run_selftest()
    click.echo(dump_structured({"checks": results}))
    if not all(r["ok"] for r in results):
        ctx.exit(EXIT_DOMAIN_ERROR)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        code = cli.main(args=list(argv) if argv is not None else None, prog_name="schiffer-lab",
                        standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE_ERROR
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return EXIT_DOMAIN_ERROR
    except LabError as e:
        logger.error(str(e), extra={"exception_chain": handle_exception_chain(e)})
        click.echo(f"error: {e}", err=True)
        return get_exit_code(e)
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
