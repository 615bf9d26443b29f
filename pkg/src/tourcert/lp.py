"""Cut-constraint LP relaxation of graph-TSP, solved exactly.

minimize sum_e x_e  subject to  x(delta(S)) >= 2 for all proper S,
0 <= x <= 1.  The box is harmless on 2-edge-connected inputs (some
optimum has x <= 1), and with it x == 1 is always a feasible start, so
the cutting-plane loop needs no phase-1: seed with the n singleton
constraints, separate violated cuts by exact global min cut, repeat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import Graph, GraphError, is_connected, is_two_edge_connected
from .mincut import min_st_cut, stoer_wagner
from .rational import ONE, Q, TWO, ZERO, qstr
from . import simplex


class LpError(Exception):
    pass


class InfeasibleLp(LpError):
    pass


class InternalInconsistency(LpError):
    """A condition the underlying theory rules out was observed."""


@dataclass(frozen=True)
class LpSolution:
    x: tuple  # per-edge Q, parallel to g.edges
    value: Q
    eps: Q
    excess: tuple  # per-vertex Q

    def support(self):
        return [i for i, v in enumerate(self.x) if v > 0]

    def to_json(self, g: Graph) -> str:
        return json.dumps(
            {
                "n": g.n,
                "value": qstr(self.value),
                "eps": qstr(self.eps),
                "x": [
                    [str(u), str(v), qstr(xe)]
                    for (u, v), xe in zip(g.edges, self.x)
                ],
            }
        )


def excesses(g: Graph, x) -> tuple:
    """Per-vertex excess: x(delta(v)) - 2."""
    out = []
    for v in range(g.n):
        out.append(sum((x[e] for e in g.adjacency[v]), ZERO) - TWO)
    return tuple(out)


def _make_solution(g: Graph, x) -> LpSolution:
    value = sum(x, ZERO)
    eps = value / g.n - ONE
    return LpSolution(x=tuple(x), value=value, eps=eps, excess=excesses(g, x))


def _weighted_support(g: Graph, x):
    return [(u, v, x[i]) for i, (u, v) in enumerate(g.edges) if x[i] > 0]


def min_cut_of_solution(g: Graph, x):
    """Exact global min cut of the x-weighted support."""
    return stoer_wagner(g.n, _weighted_support(g, x))


def solve_lp(g: Graph, round_cap: int | None = None) -> LpSolution:
    """Optimal extreme point of LP(G) by cutting planes."""
    if g.n < 3:
        raise LpError("need n >= 3")
    if not is_connected(g):
        raise InfeasibleLp("graph is disconnected")
    if not is_two_edge_connected(g):
        raise InfeasibleLp("graph has a bridge; LP with x <= 1 is infeasible")
    if round_cap is None:
        round_cap = 10 * g.n

    m = g.m
    cost = [ONE] * m
    rows = [
        {e: ONE for e in g.adjacency[v]} for v in range(g.n)
    ]
    rhs = [TWO] * g.n
    for _ in range(round_cap):
        res = simplex.solve_min(
            cost,
            rows,
            rhs,
            upper=[ONE] * m,
            basis=[m + i for i in range(len(rows))],
            at_upper=set(range(m)),
        )
        cut_w, side = stoer_wagner(g.n, _weighted_support(g, res.x))
        if cut_w >= TWO:
            return _make_solution(g, res.x)
        crossing = {
            i: ONE
            for i, (u, v) in enumerate(g.edges)
            if (u in side) != (v in side)
        }
        rows.append(crossing)
        rhs.append(TWO)
    raise LpError(f"cutting-plane loop did not converge in {round_cap} rounds")


def solve_lp_enumerated(g: Graph) -> Q:
    """Independent optimality oracle: one exact solve with every cut
    constraint written out.  Only viable at desk scale (n <= 10)."""
    if g.n > 10:
        raise LpError("full enumeration capped at n <= 10")
    if not is_two_edge_connected(g):
        raise InfeasibleLp("graph has a bridge; LP with x <= 1 is infeasible")
    m = g.m
    seen = set()
    rows = []
    for mask in range(1, 1 << (g.n - 1)):  # sides not containing vertex n-1
        side = {v for v in range(g.n - 1) if mask >> v & 1}
        crossing = frozenset(
            i for i, (u, v) in enumerate(g.edges) if (u in side) != (v in side)
        )
        if crossing not in seen:
            seen.add(crossing)
            rows.append({i: ONE for i in crossing})
    res = simplex.solve_min(
        [ONE] * m,
        rows,
        [TWO] * len(rows),
        upper=[ONE] * m,
        basis=[m + i for i in range(len(rows))],
        at_upper=set(range(m)),
    )
    return res.value


def restrict_to_support(
    g: Graph, sol: LpSolution, stats: dict | None = None
) -> tuple[Graph, LpSolution]:
    """Drop zero edges and re-solve until the support is stable.

    Vertex ids are unchanged (every vertex keeps x(delta(v)) >= 2); only
    edges are re-indexed.  The LP value never changes (asserted).
    """
    rounds = 0
    while True:
        supp = sol.support()
        if len(supp) == g.m:
            break
        g = Graph.from_edges(g.n, [g.edges[i] for i in supp])
        new_sol = solve_lp(g)
        if new_sol.value != sol.value:
            raise InternalInconsistency(
                f"support restriction changed the LP value: "
                f"{sol.value} -> {new_sol.value}"
            )
        sol = new_sol
        rounds += 1
    if stats is not None:
        stats["restrict_rounds"] = rounds
    return g, sol


def normalize_below_one(g: Graph, sol: LpSolution) -> LpSolution:
    """Rewrite an optimal solution into one with x <= 1, same value.

    Constructive loop mirroring the existence proof: an over-unit edge
    either lies in no tight cut (then it can simply be lowered) or in
    exactly one (then value transfers to a cheaper edge of that cut).
    Two tight cuts through the same over-unit edge cannot happen; seeing
    them means the solver upstream is broken.
    """
    if not is_two_edge_connected(g):
        raise LpError("normalization requires 2-edge-connected support")
    x = list(sol.x)
    for _ in range(10 * g.m + 10):
        over = next((i for i, v in enumerate(x) if v > ONE), None)
        if over is None:
            break
        i, j = g.edges[over]
        wedges = [(u, v, x[k]) for k, (u, v) in enumerate(g.edges) if x[k] > 0]
        cut_w, side = min_st_cut(g.n, wedges, i, j)
        if cut_w > TWO:
            x[over] -= min(x[over] - ONE, cut_w - TWO)
            continue
        # Tight cut through the edge: transfer onto another cut edge.
        cut_edges = [
            k
            for k, (u, v) in enumerate(g.edges)
            if (u in side) != (v in side)
        ]
        recv = next(
            (k for k in cut_edges if k != over and x[k] < ONE), None
        )
        if recv is None:
            raise InternalInconsistency(
                "tight cut has no edge below 1 to receive value"
            )
        # A second tight cut would cross the edge but keep the receiving
        # edge inside one side: detect it with both ends contracted.
        ru, rv = g.edges[recv]
        cn, cw, remap = _contract(g, x, ru, rv)
        ci, cj = remap[i], remap[j]
        if ci != cj:
            cut2, _ = min_st_cut(cn, cw, ci, cj)
            if cut2 == TWO:
                raise InternalInconsistency(
                    "edge above 1 lies in two tight cuts (solver bug)"
                )
            room = cut2 - TWO
        else:
            room = None
        delta = min(x[over] - ONE, ONE - x[recv])
        if room is not None:
            delta = min(delta, room)
        if delta <= 0:
            raise InternalInconsistency("normalization made no progress")
        x[over] -= delta
        x[recv] += delta
    else:
        raise LpError("normalization did not terminate")
    return _make_solution(g, x)


def _contract(g: Graph, x, a: int, b: int):
    """Contract vertices a and b of the x-weighted support; returns
    (n', weighted edges, vertex remap)."""
    remap = {}
    nxt = 0
    for v in range(g.n):
        if v == b:
            continue
        remap[v] = nxt
        nxt += 1
    remap[b] = remap[a]
    wedges = []
    for k, (u, v) in enumerate(g.edges):
        if x[k] <= 0:
            continue
        uu, vv = remap[u], remap[v]
        if uu != vv:
            wedges.append((uu, vv, x[k]))
    return nxt, wedges, remap


def heavy_vertices(sol: LpSolution) -> list[int]:
    return [v for v, e in enumerate(sol.excess) if e > 0]
