import logging
import sys
from functools import wraps
from typing import Literal

import click
from pydantic import BaseModel, Field

from utils.conjecture import TALBOT_VARIANTS, scan, scan_window, verify_connection
from utils.config import SolverConfig, configure_logging
from utils.CountUtil import default_vertex_bound
from utils.errors import LagrangeError
from utils.evaluate import evaluate_consistency, random_corpus
from utils.hypergraph import colex_first_m, left_compress_fixpoint
from utils.hypergraph_parser import (
    format_hypergraph, parse_alpha, parse_edge_types, parse_hypergraph, read_hypergraph,
)
from utils.lagrangian import AlphaParams, optimize, support_minimize
from utils.report import (
    format_consistency, format_optimum, format_scans, format_verdicts, optimum_record, scan_record,
    to_json, verdict_record,
)
from utils.theorems import THEOREM_VERIFIERS, TheoremInstance, verify_theorem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_INCOMPLETE = 3


class RunConfig(BaseModel):
    command: str
    input_path: str | None = None
    alpha: dict[int, float] = {}
    tol: float | None = Field(default=None, gt=0)
    seed: int | None = None
    starts: int | None = Field(default=None, ge=0)
    max_iters: int | None = Field(default=None, ge=1)
    threads: int | None = Field(default=None, ge=1)
    output_format: Literal['text', 'json'] = 'text'
    types: tuple[int, ...] | None = None
    m: int | None = None
    n: int | None = None
    t: int | None = None
    r: int | None = None
    theorem: str | None = None
    check_tol: float = Field(default=1e-7, gt=0)
    limit: int | None = Field(default=None, ge=1)
    window: str | None = None
    progress: bool = False
    cross_check: bool = True

    def solver_config(self):
        overrides = {name: getattr(self, name) for name in ('tol', 'seed', 'starts', 'max_iters', 'threads')
                     if getattr(self, name) is not None}
        return SolverConfig(**overrides)

    def alpha_params(self):
        return AlphaParams.from_mapping(self.alpha)


def handle_errors(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (LagrangeError, ValueError, OSError) as e:
            logger.debug("command failed", exc_info=True)
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)
    return wrapper


class LagrangeGroup(click.Group):
    """Usage errors exit with the input-error code instead of click's 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_INPUT)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_INPUT)


def solver_options(func):
    options = [
        click.option('--alpha', 'alpha', multiple=True, metavar='R=VALUE',
                     help='Coefficient of level R; repeat per level. The base level defaults to 1.'),
        click.option('--tol', type=float, help='Stationarity tolerance.'),
        click.option('--seed', type=int, help='Seed for the random starts.'),
        click.option('--starts', type=int, help='Number of random Dirichlet starts.'),
        click.option('--max-iters', 'max_iters', type=int, help='Ascent iterations per start.'),
        click.option('--threads', type=int, help='Worker threads for independent solves.'),
        click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default='text'),
        click.option('--log-level', 'log_level', default=None, help='Logging level (default LOG_LEVEL).'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_config(command, log_level=None, alpha=(), **options):
    configure_logging(log_level)
    return RunConfig(command=command, alpha=parse_alpha(alpha), **options)


def _load(path):
    if path == '-':
        return parse_hypergraph(sys.stdin.read())
    return read_hypergraph(path)


def _types(text):
    return parse_edge_types(text) if text else None


def _emit(run, text, payload):
    click.echo(to_json(payload) if run.output_format == 'json' else text, nl=False)


@click.group(cls=LagrangeGroup)
def cli():
    """Parametrized Lagrangians of non-uniform hypergraphs."""


@cli.command()
@click.argument('input_path')
@click.option('--minimize-support', is_flag=True, help='Shrink the support of the optimum.')
@solver_options
@handle_errors
def lagrangian(input_path, minimize_support, **options):
    """Maximize L_alpha(H, x) over the simplex for the hypergraph in INPUT_PATH ('-' for stdin)."""
    run = _run_config('lagrangian', input_path=input_path, **options)
    hypergraph = _load(input_path)
    alpha = run.alpha_params().anchored_to(hypergraph.edge_types)
    cfg = run.solver_config()
    optimum = optimize(hypergraph, alpha, cfg)
    if minimize_support:
        optimum = support_minimize(hypergraph, alpha, optimum, cfg)
    _emit(run, format_optimum(optimum), optimum_record(optimum))
    sys.exit(EXIT_OK if optimum.converged else EXIT_NOT_CONVERGED)


@cli.command()
@click.option('--type', 'types', required=True, help='Edge types, e.g. 1,3.')
@click.option('--m', type=int, required=True, help='Number of edges.')
@click.option('--log-level', 'log_level', default=None)
@handle_errors
def colex(types, m, log_level):
    """Print C_(m,T), the first m sets in colex order with sizes in T."""
    configure_logging(log_level)
    click.echo(format_hypergraph(colex_first_m(parse_edge_types(types), m)), nl=False)


@cli.command()
@click.argument('input_path')
@click.option('--log-level', 'log_level', default=None)
@handle_errors
def compress(input_path, log_level):
    """Left-compress the hypergraph in INPUT_PATH until no compression changes it."""
    configure_logging(log_level)
    hypergraph = _load(input_path)
    compressed = left_compress_fixpoint(hypergraph)
    before = ' '.join(f"{r}:{k}" for r, k in hypergraph.level_counts.items())
    after = ' '.join(f"{r}:{k}" for r, k in compressed.level_counts.items())
    status = 'unchanged' if before == after else 'CHANGED'
    click.echo(format_hypergraph(compressed, comments=[f"level counts {before} -> {after} ({status})"]),
               nl=False)


def process_verification(run, hypergraph):
    alpha = run.alpha_params()
    cfg = run.solver_config()
    instance = TheoremInstance(alpha=alpha, hypergraph=hypergraph, t=run.t, r=run.r, m=run.m, types=run.types)
    verdicts = [verify_theorem(run.theorem, instance, cfg, cross_check=run.cross_check)]
    if run.theorem == 'connection' and run.n is not None:
        types = run.types or (1, 2)
        verdicts.append(verify_connection(types, alpha, run.m, run.n, cfg, t=run.t, limit=run.limit,
                                          cross_check=run.cross_check, progress=run.progress))
    return verdicts


@cli.command()
@click.option('--theorem', required=True, help=f"One of {', '.join(THEOREM_VERIFIERS)}.")
@click.option('--input', 'input_path', default=None, help='Hypergraph file for graph-based theorems.')
@click.option('--t', type=int)
@click.option('--r', type=int)
@click.option('--m', type=int)
@click.option('--n', type=int, help='Vertex bound; with --theorem connection also runs the scan check.')
@click.option('--type', 'types', default=None)
@click.option('--check-tol', 'check_tol', type=float, default=1e-7, show_default=True)
@click.option('--limit', type=int, default=None)
@click.option('--progress', is_flag=True)
@click.option('--no-cross-check', 'cross_check', is_flag=True, flag_value=False, default=True)
@solver_options
@handle_errors
def verify(theorem, input_path, types, **options):
    """Compare a closed-form prediction with the computed optimum."""
    run = _run_config('verify', theorem=theorem, input_path=input_path, types=_types(types), **options)
    hypergraph = _load(input_path) if input_path else None
    verdicts = process_verification(run, hypergraph)
    _emit(run, format_verdicts(verdicts, run.check_tol), [verdict_record(v) for v in verdicts])
    passed = all(v.passed(run.check_tol) for v in verdicts)
    sys.exit(EXIT_OK if passed else EXIT_NOT_CONVERGED)


@cli.command('scan')
@click.option('--type', 'types', default=None, help='Edge types, e.g. 3 or 1,2.')
@click.option('--m', type=int)
@click.option('--n', type=int, help='Vertex bound (default: smallest t with sum C(t,r) >= m, plus 1).')
@click.option('--window', type=click.Choice(TALBOT_VARIANTS), default=None,
              help='Scan a whole known window instead of one m; needs --t and --r.')
@click.option('--t', type=int)
@click.option('--r', type=int, default=3)
@click.option('--limit', type=int, default=None)
@click.option('--progress', is_flag=True)
@click.option('--all-graphs', is_flag=True, help='Do not restrict to left-compressed graphs.')
@click.option('--no-cross-check', 'cross_check', is_flag=True, flag_value=False, default=True)
@solver_options
@handle_errors
def scan_command(types, all_graphs, **options):
    """Scan T-graphs with m edges on at most n vertices against C_(m,T)."""
    run = _run_config('scan', types=_types(types), **options)
    alpha = run.alpha_params()
    cfg = run.solver_config()
    kwargs = dict(limit=run.limit, cross_check=run.cross_check, progress=run.progress,
                  left_compressed_only=not all_graphs)
    if run.window:
        if run.t is None:
            raise click.UsageError('--window needs --t')
        reports = scan_window(run.r, run.t, run.window, alpha, cfg, **kwargs)
    else:
        if run.types is None or run.m is None:
            raise click.UsageError('scan needs --type and --m (or --window)')
        n = run.n if run.n is not None else default_vertex_bound(run.types, run.m)
        reports = [scan(run.types, alpha, run.m, n, cfg, **kwargs)]
    _emit(run, format_scans(reports), [scan_record(r) for r in reports])
    if not all(r.complete for r in reports):
        sys.exit(EXIT_INCOMPLETE)
    sys.exit(EXIT_OK if all(r.conjecture_holds for r in reports) else EXIT_NOT_CONVERGED)


@cli.command()
@click.option('--size', type=int, default=50, show_default=True)
@click.option('--corpus-seed', 'corpus_seed', type=int, default=0, show_default=True)
@click.option('--max-n', 'max_n', type=int, default=8, show_default=True)
@click.option('--check-tol', 'check_tol', type=float, default=1e-7, show_default=True)
@solver_options
@handle_errors
def consistency(size, corpus_seed, max_n, **options):
    """Run the optimizer and the exact oracle on a seeded random corpus."""
    run = _run_config('consistency', **options)
    frame = evaluate_consistency(random_corpus(size, corpus_seed, max_n), run.solver_config())
    _emit(run, format_consistency(frame), frame.to_dict(orient='records'))
    sys.exit(EXIT_OK if bool((frame['gap'] <= run.check_tol).all()) else EXIT_NOT_CONVERGED)


if __name__ == '__main__':
    cli()
