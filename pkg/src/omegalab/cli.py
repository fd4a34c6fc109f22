"""Command-line interface: ``omegalab <command> ...``."""
from __future__ import annotations

import csv
import json
import math
import sys

import click
import numpy as np

from . import arith, dioph, hunter, resonance
from . import series as ser
from .ddarith import DD, dd_sqrt
from .errors import InvalidArgument
from .errterm import ErrKind, error_profile


def _floats(text: str) -> list:
    """``a,b,c`` or ``start:stop:step`` (stop inclusive)."""
    if ":" in text:
        a, b, h = (float(v) for v in text.split(":"))
        if h <= 0:
            raise click.BadParameter("step must be positive")
        n = int(math.floor((b - a) / h + 1e-9)) + 1
        return [a + i * h for i in range(n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _kind(text: str) -> ErrKind:
    try:
        return ErrKind.parse(text)
    except (InvalidArgument, ValueError) as exc:
        raise click.BadParameter(str(exc))


def _table(ctx: click.Context, limit: int, ks=()) -> arith.SieveTable:
    opts = ctx.find_root().obj
    limit = max(int(limit), opts["sieve_limit"] or 0, 16)
    return arith.cached_sieve(limit, [k for k in ks if k != 2], opts["sieve_cache"])


def _emit(obj) -> None:
    click.echo(json.dumps(obj, default=_jsonable))


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(type(v))


@click.group()
@click.option("--sieve-cache", type=click.Path(dir_okay=False), default=None,
              help="Binary sieve cache, read if it covers the request and written otherwise.")
@click.option("--sieve-limit", type=int, default=None, help="Build the sieve at least this far.")
@click.pass_context
def main(ctx, sieve_cache, sieve_limit):
    """Error terms, Voronoi truncations and resonance hunts for the divisor,
    circle and Piltz problems."""
    ctx.obj = {"sieve_cache": sieve_cache, "sieve_limit": sieve_limit}


@main.command()
@click.option("--kind", "kind_text", required=True, help="divisor | circle | piltz:k")
@click.option("--x", "x_text", required=True, help="a,b,c or start:stop:step")
@click.pass_context
def errterm(ctx, kind_text, x_text):
    """CSV of (x, err, normalized)."""
    kind = _kind(kind_text)
    xs = _floats(x_text)
    table = _table(ctx, math.ceil(max(xs)), [kind.order] if kind.tag == "piltz" else [])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["x", "err", "normalized"])
    for row in error_profile(kind, table, xs):
        w.writerow([repr(v) for v in row])


@main.group("series")
def series_group():
    """Truncated-series comparisons."""


@series_group.command()
@click.option("--kind", "kind_text", type=click.Choice(["divisor", "circle"]), required=True)
@click.option("--cutoff", type=int, required=True)
@click.option("--y-range", "y_text", required=True, help="a,b,c or start:stop:step")
@click.pass_context
def compare(ctx, kind_text, cutoff, y_text):
    """CSV of (y, exact, approx, abserr)."""
    kind = _kind(kind_text)
    ys = _floats(y_text)
    table = _table(ctx, max(cutoff, math.ceil(max(ys))))
    if kind.tag == "divisor":
        s = ser.divisor_series(table, cutoff)
        approx = lambda y: ser.approx_delta(table, cutoff, y, s)
    else:
        s = ser.circle_series(table, cutoff)
        approx = lambda y: ser.approx_P(table, cutoff, y, s)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["y", "exact", "approx", "abserr"])
    for y, exact, _ in error_profile(kind, table, ys):
        a = approx(y)
        w.writerow([repr(y), repr(exact), repr(a), repr(abs(a - exact))])


@series_group.command()
@click.option("--k", type=int, required=True)
@click.option("--x", type=float, required=True)
@click.option("--N", "N", type=float, required=True)
@click.pass_context
def prop4(ctx, k, x, N):
    """Gaussian-smoothed Piltz identity: lhs, rhs, diff."""
    cutoff = ser.piltz_cutoff(k, N)
    q = ser.QuadConfig()
    top = math.exp(k * math.log(x) + q.support / N ** (1 / k) / x)
    table = _table(ctx, max(cutoff, math.ceil(top) + 1), [k])
    lhs = ser.smoothed_lhs(k, table, x, N, q)
    rhs = ser.smoothed_rhs(k, table, x, N, cutoff)
    _emit({"k": k, "x": x, "N": N, "lhs": lhs, "rhs": rhs, "diff": lhs - rhs})


@main.command("dioph")
@click.option("--freqs", "freq_text", default=None, help="Comma-separated frequencies.")
@click.option("--sqrt-of", "sqrt_text", default=None,
              help="Comma-separated integers n; frequencies scale*sqrt(n) in double-double.")
@click.option("--scale", type=float, default=1.0, show_default=True)
@click.option("--L", "L", type=int, required=True)
@click.option("--X", "X", type=float, required=True)
@click.option("--method", type=click.Choice(["scan", "lattice"]), default="scan", show_default=True)
@click.option("--budget", type=int, default=dioph.DEFAULT_BUDGET, show_default=True)
def dioph_cmd(freq_text, sqrt_text, scale, L, X, method, budget):
    """Find x0 >= X with every ||lambda x0|| <= 1/(6L); JSON output."""
    if (freq_text is None) == (sqrt_text is None):
        raise click.UsageError("give exactly one of --freqs and --sqrt-of")
    if freq_text is not None:
        freqs = [float(v) for v in freq_text.split(",")]
    else:
        freqs = []
        for n in sqrt_text.split(","):
            h, l = dd_sqrt(float(n))
            freqs.append(DD(float(h) * scale, float(l) * scale))
    target = dioph.ApproxTarget.for_lemma(freqs, L, X)
    try:
        sol = (dioph.scan_search(target, budget=budget) if method == "scan"
               else dioph.lattice_search(target))
    except (dioph.BudgetExceeded, dioph.ApproxNotFound) as exc:
        out = exc.best.to_json() if exc.best is not None else {"x0": None, "certified": False}
        out["error"] = str(exc)
        _emit(out)
        sys.exit(2)
    _emit(sol.to_json())


@main.group("resonance")
def resonance_group():
    """Resonance sets and S(M)."""


@resonance_group.command()
@click.option("--N", "N", type=float, required=True)
@click.option("--lambda", "lam_text", default="auto", show_default=True)
@click.option("--case", "case_text", default="divisor", show_default=True,
              help="divisor | circle | piltz:k")
@click.option("--mod4", is_flag=True, help="Restrict to primes = 1 mod 4.")
@click.option("--cap", type=int, default=None)
@click.pass_context
def build(ctx, N, lam_text, case_text, mod4, cap):
    case = _kind(case_text)
    key = str(case)
    lam = resonance.optimal_lambda(key) if lam_text == "auto" else float(lam_text)
    kind = key if case.tag == "piltz" else "divisor-circle"
    _, hi = resonance.interval_for(N, kind)
    table = _table(ctx, math.floor(hi), [case.order] if case.tag == "piltz" else [])
    mset = resonance.build_set(table, N, lam, kind, mod4=mod4, cap=cap)
    _emit(mset.summary(table))


@resonance_group.command()
@click.option("--M", "M", type=int, required=True)
@click.option("--limit", type=int, required=True)
@click.pass_context
def som(ctx, M, limit):
    """Sum of the M largest d(n) n^-3/4 over n <= limit."""
    table = _table(ctx, limit)
    _emit({"M": M, "S": resonance.s_of_m(table, M, limit)})


@main.group("hunt", invoke_without_command=True)
@click.option("--case", "case_text", default="divisor", show_default=True)
@click.option("--X", "X", type=float, default=1e3, show_default=True)
@click.option("--L", "L", type=int, default=4, show_default=True)
@click.option("--N", "N", type=float, default=None, help="Override the N recipe.")
@click.option("--N-coef", "N_coef", type=float, default=1.0, show_default=True)
@click.option("--lambda", "lam_text", default="auto", show_default=True)
@click.option("--cutoff", type=int, default=None)
@click.option("--m-cap", "M_cap", type=int, default=3, show_default=True)
@click.option("--method", type=click.Choice(["scan", "lattice"]), default="scan", show_default=True)
@click.option("--window-step", type=float, default=None)
@click.option("--seed", type=int, default=42, show_default=True)
@click.pass_context
def hunt_group(ctx, case_text, X, L, N, N_coef, lam_text, cutoff, M_cap, method,
               window_step, seed):
    """Run the resonance construction; one JSON line per record."""
    config = hunter.HuntConfig(
        case=_kind(case_text), X=X, L=L, N=N, N_coef=N_coef,
        lambda_param=None if lam_text == "auto" else float(lam_text), cutoff=cutoff,
        M_cap=M_cap, dioph_method=method, window_step=window_step, seed=seed)
    ctx.obj = {**ctx.find_root().obj, "config": config}
    if ctx.invoked_subcommand is None:
        record = _run_hunt(ctx, config)
        _emit(record.to_json())
        if not record.invariants_ok:
            sys.exit(1)


def _hunt_table(ctx, config: hunter.HuntConfig) -> arith.SieveTable:
    case = config.case
    probe = _table(ctx, 16)
    _, N, _, cutoff = hunter.resolve(config, probe)
    kind = str(case) if case.tag == "piltz" else "divisor-circle"
    _, hi = resonance.interval_for(N, kind)
    return _table(ctx, max(cutoff, math.floor(hi)), [case.order] if case.tag == "piltz" else [])


def _run_hunt(ctx, config):
    return hunter.hunt(config, _hunt_table(ctx, config))


@hunt_group.command("verify-lemma3")
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
def verify_lemma3(trials, seed):
    report = hunter.verify_lemma3(trials, seed)
    _emit(report)
    if not report["all_passed"]:
        sys.exit(1)


@hunt_group.command()
@click.option("--samples", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to the hunt seed.")
@click.pass_context
def baseline(ctx, samples, seed):
    """Random-x control over the dyadic range containing the hunt's x_best."""
    config = ctx.obj["config"]
    table = _hunt_table(ctx, config)
    record = hunter.hunt(config, table)
    summary = hunter.baseline_random(config, table, samples, seed,
                                     hunter.dyadic_range(record.x_best))
    summary["hunt_score"] = record.normalized_score
    summary["x_best"] = record.x_best
    _emit(summary)
    if not record.invariants_ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
