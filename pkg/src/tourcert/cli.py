"""Command-line front end.

Exit codes: 0 success, 1 a certification check failed, 2 usage or input
errors.  Output is deterministic for identical arguments.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import certify as certify_mod
from . import circulation as circ
from . import dfs, lp
from .graph import (
    Graph,
    GraphError,
    format_edge_list,
    generate_random_subquartic,
    parse_edge_list,
)
from .rational import Q, ZERO, parse_q


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tourcert",
        description="Exact certification of graph-TSP tour bounds on "
        "subquartic graphs.",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_io(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="edge-list file")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("generate", help="emit a random subquartic instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sparsity", type=float, default=0.0)
    add_io(sp, needs_input=False)

    sp = sub.add_parser("solve", help="solve the cut LP exactly")
    add_io(sp)

    sp = sub.add_parser("tree", help="greedy DFS tree and classification")
    add_io(sp)

    sp = sub.add_parser("circulate", help="build one circulation")
    add_io(sp)
    sp.add_argument(
        "--method",
        choices=["x", "f", "best", "oracle", "half"],
        default="best",
    )
    sp.add_argument("--c2", default="0", help="rounding parameter (rational)")

    sp = sub.add_parser("certify", help="full pipeline with all checks")
    add_io(sp)
    sp.add_argument("--root-term", choices=["0", "2"], default="2")
    sp.add_argument("--c2", default="0")

    sp = sub.add_parser("sweep", help="certify many generated instances")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sparsity", type=float, default=0.0)
    sp.add_argument("--c2", default="0")
    sp.add_argument("--root-term", choices=["0", "2"], default="2")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--plots", help="directory for report figures")
    sp.add_argument("--out", help="output file (default: stdout)")
    return p


def _read_graph(path: str) -> Graph:
    try:
        with open(path) as fh:
            return parse_edge_list(fh.read())
    except OSError as exc:
        raise UsageError(f"--input {path}: {exc.strerror or exc}")
    except ValueError as exc:  # GraphError included
        raise UsageError(f"--input {path}: {exc}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pipeline(g: Graph):
    sol = lp.solve_lp(g)
    gs, sol = lp.restrict_to_support(g, sol)
    sol = lp.normalize_below_one(gs, sol)
    root = dfs.choose_root(gs, sol)
    t = dfs.build_greedy_dfs(gs, sol, root)
    cls = dfs.classify(gs, sol, t)
    return gs, sol, t, cls


def _cmd_generate(args) -> int:
    try:
        g = generate_random_subquartic(
            args.n, args.seed, sparsity=args.sparsity
        )
    except GraphError as exc:
        raise UsageError(f"--n {args.n}: {exc}")
    _emit(format_edge_list(g), args.out)
    return 0


def _cmd_solve(args) -> int:
    g = _read_graph(args.input)
    sol = lp.solve_lp(g)
    _emit(sol.to_json(g) + "\n", args.out)
    return 0


def _cmd_tree(args) -> int:
    g = _read_graph(args.input)
    gs, sol, t, cls = _pipeline(g)
    flags = {
        "internal": list(cls.internal),
        "branch": list(cls.branch),
        "expensive": list(cls.expensive),
        "heavy": list(cls.heavy),
        "lp_satisfied": list(cls.lp_satisfied),
    }
    _emit(t.to_json(flags) + "\n", args.out)
    return 0


def _cmd_circulate(args) -> int:
    g = _read_graph(args.input)
    c2 = _parse_c2(args.c2)
    gs, sol, t, cls = _pipeline(g)
    if args.method == "x":
        c = circ.x_circulation(gs, sol, t, cls)
    elif args.method == "f":
        c = circ.f_circulation(gs, sol, t, cls, c2)
    elif args.method == "best":
        c, _, _ = circ.best_circulation(gs, sol, t, cls)
    elif args.method == "oracle":
        c = circ.oracle_min_circulation(t, cls)
    else:
        c = circ.half_circulation(t, cls)
    _emit(c.to_json(t) + "\n", args.out)
    return 0


def _cmd_certify(args) -> int:
    g = _read_graph(args.input)
    cert = certify_mod.certify(
        g, root_term=Q(int(args.root_term)), c2=_parse_c2(args.c2)
    )
    _emit(cert.to_json() + "\n", args.out)
    return 0 if cert.all_pass else 1


def _cmd_sweep(args) -> int:
    if args.count < 1:
        raise UsageError(f"--count {args.count}: must be >= 1")
    summary = certify_mod.sweep(
        args.count,
        args.n,
        args.seed,
        c2=_parse_c2(args.c2),
        sparsity=args.sparsity,
        root_term=Q(int(args.root_term)),
        jobs=max(1, args.jobs),
    )
    if args.format == "csv":
        _emit(summary.to_csv(), args.out)
    else:
        _emit(
            json.dumps(
                [c.to_dict() for c in summary.certificates], indent=2
            )
            + "\n",
            args.out,
        )
    if args.plots:
        from . import plots

        plots.render_report(summary, args.plots)
    return 0 if summary.all_pass else 1


def _parse_c2(text: str) -> Q:
    try:
        c2 = parse_q(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--c2 {text}: not a rational")
    if c2 < ZERO:
        raise UsageError(f"--c2 {text}: must be >= 0")
    return c2


_DISPATCH = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "tree": _cmd_tree,
    "circulate": _cmd_circulate,
    "certify": _cmd_certify,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return _DISPATCH[args.cmd](args)
    except UsageError as exc:
        print(f"tourcert: {exc}", file=sys.stderr)
        return 2
    except lp.LpError as exc:
        print(f"tourcert: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
