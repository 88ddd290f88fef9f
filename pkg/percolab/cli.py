"""Command line: percolab gen | percolate | dfs | extremal | prob | sweep | verify.

Results go to stdout or --out; logging goes to stderr. Usage errors exit
with 2 and a failed `verify` exits with 1.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence, TextIO

import numpy as np

from percolab import __version__, config, edgelist, explorer, extremal, generators, harness, verify
from percolab.errors import PercolabError, UsageError
from percolab.graph import Graph, excess
from percolab.percolation import sample
from percolab.validation import validate_family, validate_gen_spec

logger = logging.getLogger("percolab")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULT_ELLS = (1, 2, 5, 10)
PROB_KINDS = ("path", "cycle", "component", "excess", "isolated", "stack")


def configure_logging(verbosity: int) -> None:
    level = {1: logging.DEBUG, -1: logging.WARNING}.get(verbosity, config.LOG_LEVEL)
    logging.basicConfig(level=level, format=config.LOG_FORMAT, stream=sys.stderr, force=True)


################################################################################
### Argument helpers
def _load_graph(args: argparse.Namespace) -> tuple[Graph, str]:
    if getattr(args, "input", None):
        return edgelist.read(args.input), str(args.input)
    is_valid, spec, error = validate_gen_spec(args.gen)
    if not is_valid:
        raise UsageError(error)
    return generators.build_from_spec(spec), json.dumps(spec.to_json(), sort_keys=True)


def _add_graph_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", type=Path, help="edge-list file")
    group.add_argument("--gen", help="generator spec, e.g. complete:1001 or JSON")


def _parse_grid(text: str, G: Graph) -> list[float]:
    """"lo:hi:count" (evenly spaced, inclusive) or a comma list that may use auto(c)."""
    parts = text.split(":")
    if len(parts) == 3 and not text.startswith("auto"):
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError(f"bad grid {text!r}, expected lo:hi:count") from None
        if count < 1:
            raise UsageError("grid needs at least one point")
        return [float(x) for x in np.linspace(lo, hi, count)]
    return [harness.resolve_probability(item, G) for item in text.split(",") if item.strip()]


def _open_out(path: Path | None) -> TextIO:
    return open(path, "w", encoding="ascii", newline="") if path else sys.stdout


def _emit_json(obj: Any, path: Path | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        path.write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


################################################################################
### Subcommands
def cmd_gen(args: argparse.Namespace) -> int:
    is_valid, spec, error = validate_gen_spec(args.spec)
    if not is_valid:
        raise UsageError(error)
    G = generators.build_from_spec(spec)
    logger.info("generated %s: n=%d m=%d", spec, G.n, G.m)
    if args.out:
        edgelist.write(G, args.out)
    else:
        sys.stdout.write(edgelist.dumps(G))
    return EXIT_OK


def cmd_percolate(args: argparse.Namespace) -> int:
    G = edgelist.read(args.input)
    p = harness.resolve_probability(args.p, G)
    sub = sample(G, p, args.seed)
    H = sub.materialize()
    sidecar = {"p": p, "seed": args.seed, "kept_count": sub.kept_count}
    if args.out:
        edgelist.write(H, args.out)
        sidecar_path = args.sidecar or args.out.with_name(args.out.name + ".json")
        _emit_json(sidecar, sidecar_path)
    else:
        sys.stdout.write(edgelist.dumps(H))
        if args.sidecar:
            _emit_json(sidecar, args.sidecar)
    return EXIT_OK


def cmd_dfs(args: argparse.Namespace) -> int:
    G, _ = _load_graph(args)
    p = harness.resolve_probability(args.p, G)
    sub = sample(G, p, args.seed)
    result = explorer.run(G, sub)
    ells = args.ell or DEFAULT_ELLS
    out = {
        "max_U": result.max_u,
        "certified_cycle_len": explorer.certified_cycle_length(result),
        "excess": excess(sub.materialize()),
        "Q": result.phase1_query_count,
        "P": result.phase1_positive_count,
        "phase1_positive": result.phase1_positive_count,
        "back_edges": result.phase2_positive_count,
        "long_unqueried": {str(ell): explorer.long_unqueried_count(result, ell) for ell in ells},
    }
    if args.trace:
        args.trace.write_text(result.trace().to_string() + "\n", encoding="ascii")
    _emit_json(out, args.out)
    return EXIT_OK


def cmd_extremal(args: argparse.Namespace) -> int:
    is_valid, family, error = validate_family(args.family)
    if not is_valid:
        raise UsageError(error)
    if args.nh is not None:
        nh = extremal.n_h_bracket(args.nh, family, args.c_up, args.c_lo)
        out: dict[str, Any] = {"family": family.to_json(), "k": args.nh,
                               "n_H": [nh.n_lo, nh.n_hi]}
        if args.eps is not None:
            out["path_len"] = list(extremal.path_len_budget(args.nh, args.eps, family, args.c_up, args.c_lo))
        if args.c is not None:
            out["cycle_len"] = list(extremal.cycle_len_budget(args.nh, args.c, family, args.c_up, args.c_lo))
        _emit_json(out, args.out)
        return EXIT_OK
    lo, _, hi = args.n.partition(":")
    try:
        ns = range(int(lo), int(hi or lo) + 1)
    except ValueError:
        raise UsageError(f"bad range {args.n!r}, expected N or LO:HI") from None
    fh = _open_out(args.out)
    try:
        fh.write("n,lower,exact,upper\n")
        for n in ns:
            row = extremal.ex_bracket(n, family, args.c_up, args.c_lo).to_row()
            fh.write(",".join(str(x) for x in row) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_prob(args: argparse.Namespace) -> int:
    G, spec = _load_graph(args)
    p = harness.resolve_probability(args.p, G)
    logger.info("prob %s on %s with p=%.6g", args.kind, spec, p)
    if args.kind in ("path", "cycle"):
        if args.len is None:
            raise UsageError(f"--len is required for --kind {args.kind}")
        result = harness.structure_prob(G, p, args.kind, args.len, args.trials, args.seed, args.workers).to_json()
    elif args.kind == "component":
        if args.size is None:
            raise UsageError("--size is required for --kind component")
        result = harness.component_prob(G, p, args.vertex, args.size, args.trials, args.seed, args.workers).to_json()
    elif args.kind == "excess":
        result = harness.excess_stats(G, p, args.trials, args.seed, workers=args.workers).to_json()
    elif args.kind == "isolated":
        result = harness.isolated_stats(G, p, args.trials, args.seed, args.workers).to_json()
    else:
        if args.len is None:
            raise UsageError("--len is required for --kind stack")
        result = harness.explored_stack_prob(G, p, args.len, args.eps, args.trials, args.seed, args.workers).to_json()
    result = {"kind": args.kind, "p": p} | result
    _emit_json(harness.report(spec, G, [result], args.seed), args.out)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    G, spec = _load_graph(args)
    grid = _parse_grid(args.p, G)
    rows = harness.sweep(G, grid, args.lstar, args.trials, args.seed, args.workers)
    fh = _open_out(args.out)
    try:
        harness.write_sweep_csv(rows, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.report:
        _emit_json(harness.report(spec, G, [row.to_json() for row in rows], args.seed), args.report)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = verify.run_suite(quick=not args.full)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"{status} {r.name}\n")
        for failure in r.failures[:10]:
            sys.stdout.write(f"  {failure}\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


################################################################################
### Parser
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percolab", description="DFS exploration of p-random subgraphs.")
    parser.add_argument("--version", action="version", version=f"percolab {__version__}")
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_const", const=1, dest="verbosity", default=0)
    noise.add_argument("-q", "--quiet", action="store_const", const=-1, dest="verbosity")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a base graph as an edge list")
    p.add_argument("spec", help="generator spec, e.g. regular:5000:100,seed=3 or JSON")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("percolate", help="sample G_p from an edge list")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--p", required=True, help="probability or auto(c)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--sidecar", type=Path, help="JSON sidecar path (default: OUT.json)")
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("dfs", help="run the two-phase DFS on one sample")
    _add_graph_source(p)
    p.add_argument("--p", required=True, help="probability or auto(c)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ell", type=int, action="append", help="report unqueried pairs with len >= ELL")
    p.add_argument("--trace", type=Path, help="write the answer bit string here")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_dfs)

    p = sub.add_parser("extremal", help="Turán brackets as CSV, or n_H and length budgets")
    p.add_argument("--family", required=True, help="empty, girth:G, cycles:3,4 or JSON")
    p.add_argument("--n", default="1:8", help="N or LO:HI")
    p.add_argument("--nh", type=float, help="report the n_H(k) bracket for this k instead")
    p.add_argument("--eps", type=float, help="with --nh: also the path length budget")
    p.add_argument("--c", type=float, help="with --nh: also the cycle length budget")
    p.add_argument("--c-up", type=float, default=config.DEFAULT_C_UP)
    p.add_argument("--c-lo", type=float, default=config.DEFAULT_C_LO)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("prob", help="Monte Carlo probability estimate")
    _add_graph_source(p)
    p.add_argument("--kind", choices=PROB_KINDS, required=True)
    p.add_argument("--p", required=True, help="probability or auto(c)")
    p.add_argument("--len", type=int)
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--size", type=int)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("sweep", help="coupled sweep over a p grid, CSV output")
    _add_graph_source(p)
    p.add_argument("--p", required=True, help="LO:HI:COUNT or a comma list (auto(c) allowed)")
    p.add_argument("--lstar", type=int, default=10)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path)
    p.add_argument("--report", type=Path, help="also write a JSON report")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the property suite")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", default=True)
    mode.add_argument("--full", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbosity)
    try:
        return args.func(args)
    except (PercolabError, OSError) as e:
        sys.stderr.write(f"percolab: error: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())
