"""Command-line interface: ``totalcolor color | verify | oracle | bench``.

Exit codes: 0 validated success, 2 certified failure, 3 input or hypothesis error.
JSON goes to stdout (or ``--out``); human summaries go to stderr.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .bench import format_table, run_bench
from .errors import GraphFormatError, PreconditionError
from .graph import Multigraph, handle
from .io import FORMATS, emit_graph6, parse_graph
from .matching import max_matching
from .reduction import build_augmented
from .solve import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, solve
from .verify import (
    TotalColoring,
    brute_chromatic_index,
    brute_total_chromatic,
    validate_good,
    validate_total,
)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write(obj, out: str | None) -> None:
    text = _dumps(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _read_bytes(src: str) -> bytes:
    if src == "-":
        return sys.stdin.buffer.read()
    return Path(src).read_bytes()


def _load_graph(src: str, fmt: str):
    try:
        return parse_graph(_read_bytes(src), fmt)
    except (GraphFormatError, ValueError, OSError) as exc:
        click.echo(f"error: cannot read graph: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _fraction(_ctx, _param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a number: {value!r}")


input_opt = click.option("-i", "--input", "src", required=True, help='Graph file, or "-" for stdin.')
format_opt = click.option("--format", "fmt", type=click.Choice(FORMATS), default="graph6", show_default=True)
out_opt = click.option("--out", default=None, help="Write JSON here instead of stdout.")


@click.group()
@click.version_option(__version__)
def main():
    """Total colorings with at most Δ+2 colors for dense graphs."""


@main.command("color")
@input_opt
@format_opt
@click.option("--epsilon", default="1/10", callback=_fraction, show_default=True)
@click.option("--xi", default=None, callback=_fraction, help="Default: min(ε³, 1/100).")
@click.option("--mode", type=click.Choice(["best-effort", "strict"]), default="best-effort", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trace", is_flag=True, help="Include the log of every switch and path exchange.")
@click.option("--explain", is_flag=True, help="Print the classification and route to stderr.")
@click.option("--timings", is_flag=True, help="Add wall time to the JSON (breaks byte-identical reruns).")
@out_opt
def color_cmd(src, fmt, epsilon, xi, mode, seed, trace, explain, timings, out):
    """Total-color a graph and report how."""
    g = _load_graph(src, fmt)
    res = cmd_color(g, epsilon, xi, mode, seed, trace)
    payload = {"report": res.report.to_json(timings=timings),
               "coloring": res.coloring.to_json() if res.coloring else None}
    if trace:
        payload["trace"] = res.trace or []
    _write(payload, out)
    if explain:
        click.echo(explain_text(res.report), err=True)
    sys.exit(res.exit_code)


def cmd_color(g, epsilon=Fraction(1, 10), xi=None, mode="best-effort", seed=0, trace=False):
    return solve(g, epsilon, xi, mode=mode, seed=seed, trace=trace)


def explain_text(report) -> str:
    lines = [f"graph: n={report.n} m={report.m} Δ={report.Delta} δ={report.delta}",
             f"mode={report.mode} ε={report.eps} ξ={report.xi} seed={report.seed}"]
    if report.plan:
        cl = report.plan["classification"]
        lines.append(f"classification: {cl['which']} ({cl['diagnostics'].get('route', '')}), |M|={cl['M_size']}")
        lines.append(f"stages: {', '.join(report.plan['stages'])}; core case {report.plan['core_case']}")
    if report.pipeline:
        pp = report.pipeline["params"]
        failed = [k for k, v in report.pipeline["assertions"].items() if v["failures"]]
        lines.append(f"pipeline: ok={report.pipeline['ok']} k={pp['k']} ℓ={pp['ell']} "
                     f"(asymptotic k={pp['k_asymptotic']}); checks failing at this size: {len(failed)}")
    if report.failure:
        lines.append(f"failure: {report.failure}")
    lines.append(f"status={report.status} route={report.route} colors={report.colors_used} (bound {report.Delta + 2})")
    return "\n".join(lines)


@main.command("verify")
@input_opt
@format_opt
@click.option("--coloring", "coloring_src", required=True, help="Coloring JSON (total, or good with an \"M\" key).")
@out_opt
def verify_cmd(src, fmt, coloring_src, out):
    """Validate a total coloring of G, or a good coloring of G^M."""
    g = _load_graph(src, fmt)
    try:
        payload = json.loads(_read_bytes(coloring_src))
        verdict, kind = cmd_verify(g, payload)
    except (ValueError, KeyError, TypeError, PreconditionError, OSError) as exc:
        click.echo(f"error: schema mismatch: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    _write({"kind": kind, **verdict.to_json()}, out)
    sys.exit(EXIT_OK if verdict.ok else EXIT_FAILURE)


def cmd_verify(g, payload: dict):
    """Dispatch on the payload: ``vertices`` means total, ``M`` means good."""
    if "coloring" in payload and isinstance(payload["coloring"], dict):
        payload = payload["coloring"]
    if "vertices" in payload:
        return validate_total(g, TotalColoring.from_json(payload)), "total"
    if "M" in payload:
        ag = build_augmented(g, [tuple(e) for e in payload["M"]])
        asg = {}
        for row in payload["edges"]:
            u, v, s, col = (int(t) for t in row)
            asg[handle(u, v, s)] = col
        return validate_good(ag, asg), "good"
    raise ValueError('payload has neither "vertices" nor "M"')


@main.command("oracle")
@input_opt
@format_opt
@click.option("--what", type=click.Choice(["total-chromatic", "chromatic-index", "matching"]),
              default="total-chromatic", show_default=True)
@click.option("--cache", default=None, help="JSON cache keyed by graph6.")
@out_opt
def oracle_cmd(src, fmt, what, cache, out):
    """Exact values by brute force for small graphs."""
    g = _load_graph(src, fmt)
    try:
        result = cmd_oracle(g, what, cache)
    except PreconditionError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    _write(result, out)


def cmd_oracle(g, what: str = "total-chromatic", cache: str | None = None) -> dict:
    key = emit_graph6(g).decode().strip()
    store = {}
    if cache and Path(cache).exists():
        store = json.loads(Path(cache).read_text(encoding="utf-8"))
    hit = store.get(key, {}).get(what)
    if hit is None:
        if what == "total-chromatic":
            hit = brute_total_chromatic(g)
        elif what == "chromatic-index":
            hit = brute_chromatic_index(Multigraph(g.n, g.edges()))
        else:
            hit = max_matching(g).size
        if cache:
            store.setdefault(key, {})[what] = hit
            Path(cache).write_text(_dumps(store), encoding="utf-8")
    return {"graph6": key, "n": g.n, "Delta": g.max_degree(), what: hit}


@main.command("bench")
@click.option("--n", "ns", type=int, multiple=True, default=(60, 100), show_default=True)
@click.option("--density", type=float, default=0.65, show_default=True)
@click.option("--epsilon", default="1/10", callback=_fraction, show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mode", type=click.Choice(["best-effort", "strict"]), default="best-effort", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--timings", is_flag=True, help="Add wall times to the JSON (breaks byte-identical reruns).")
@out_opt
def bench_cmd(ns, density, epsilon, trials, seed, mode, jobs, timings, out):
    """Success rate of the whole route on random dense graphs."""
    report = cmd_bench(ns, density, epsilon, trials, seed, mode, jobs, timings)
    _write(report, out)
    click.echo(format_table(report), err=True)


def cmd_bench(ns, density=0.65, epsilon=Fraction(1, 10), trials=20, seed=0, mode="best-effort", jobs=1,
              timings=False) -> dict:
    return run_bench(ns, density, epsilon, trials, seed, mode, jobs, timings)


if __name__ == "__main__":  # pragma: no cover
    main()
