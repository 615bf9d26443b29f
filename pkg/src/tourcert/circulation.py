"""Back-edge valuations ("circulations") on the DFS-tree network and
their exact costs.

Four constructions: raw LP values with excess/2 fix-ups, the piecewise
rounding with excess fix-ups, the best of the two, and the all-halves
special case; plus an exact LP oracle for the true minimum of the cost
functional.  Cost at an expensive vertex j is max{0, in(j) - 1} where
in(j) sums the values on its incoming back edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dfs import DfsTree, VertexClassification, is_satisfied_by
from .graph import Graph
from .lp import InternalInconsistency, LpSolution
from .rational import HALF, ONE, Q, TWO, ZERO, qstr
from . import simplex


class CirculationError(Exception):
    pass


@dataclass(frozen=True)
class Circulation:
    method: str  # X | F | BEST | ORACLE | HALF
    b: tuple  # per back-edge Q, indexed like t.back_edges
    vertex_cost: dict  # expensive vertex -> Q
    total_cost: Q
    pre_fixup_cost: Q  # cost of the valuation before any fix-up
    payments: dict = field(default_factory=dict)  # vertex -> Q spent
    repairs: int = 0  # vertices needing more than the theoretical payment
    excess_payment: Q = ZERO  # total spent beyond the theoretical amounts
    feasible: bool = True
    root_term: Q = TWO

    @property
    def total_payments(self) -> Q:
        return sum(self.payments.values(), ZERO)

    def to_json(self, t: DfsTree) -> str:
        return json.dumps(
            {
                "method": self.method,
                "feasible": self.feasible,
                "b": [
                    [i, j, qstr(val)]
                    for (i, j, _), val in zip(t.back_edges, self.b)
                ],
                "vertex_cost": {
                    str(v): qstr(c) for v, c in sorted(self.vertex_cost.items())
                },
                "total_cost": qstr(self.total_cost),
                "payments": {
                    str(v): qstr(p) for v, p in sorted(self.payments.items())
                },
                "total_payments": qstr(self.total_payments),
                "repairs": self.repairs,
                "excess_payment": qstr(self.excess_payment),
                "root_term": qstr(self.root_term),
            }
        )


def in_values(t: DfsTree, cls: VertexClassification, b) -> dict:
    return {
        v: sum((b[p] for p in cls.incoming_back[v]), ZERO)
        for v in range(t.n)
    }


def cost(t: DfsTree, cls: VertexClassification, b) -> Q:
    """Total cost of a valuation: expensive-vertex overflow only (valid
    because subquartic internal branch vertices are never expensive)."""
    total = ZERO
    for j in cls.expensive_vertices:
        inj = sum((b[p] for p in cls.incoming_back[j]), ZERO)
        if inj > ONE:
            total += inj - ONE
    return total


def vertex_costs(t: DfsTree, cls: VertexClassification, b) -> dict:
    out = {}
    for j in cls.expensive_vertices:
        inj = sum((b[p] for p in cls.incoming_back[j]), ZERO)
        out[j] = inj - ONE if inj > ONE else ZERO
    return out


def c_x(j: int, sol: LpSolution, cls: VertexClassification) -> Q:
    """x_min + x_max - 1 - excess(j) for an expensive vertex j."""
    if not cls.expensive[j]:
        raise CirculationError(f"vertex {j} is not expensive")
    return cls.x_min[j] + cls.x_max[j] - ONE - sol.excess[j]


def f_breakpoints(c2: Q) -> tuple[Q, Q]:
    c2 = Q(c2)
    shift = c2 / (4 * (c2 + 2))
    return Q(1, 4) - shift, Q(3, 4) + shift


def f_of_x(x: Q, c2: Q = ZERO) -> Q:
    """Piecewise rounding of an LP value toward 1/2."""
    c2 = Q(c2)
    if c2 < 0:
        raise CirculationError("rounding parameter must be >= 0")
    lo, hi = f_breakpoints(c2)
    if x > hi:
        return (TWO + c2) * x - c2 - ONE
    if x < lo:
        return (TWO + c2) * x
    return HALF


def f_values(sol: LpSolution, t: DfsTree, c2: Q = ZERO) -> list:
    vals = []
    for (_, _, ei) in t.back_edges:
        if sol.x[ei] > ONE:
            raise CirculationError("rounding requires x <= 1 on back edges")
        vals.append(f_of_x(sol.x[ei], c2))
    return vals


def c_f(
    j: int,
    sol: LpSolution,
    t: DfsTree,
    cls: VertexClassification,
    c2: Q = ZERO,
) -> Q:
    """sum of rounded incoming values - 1 - excess(j) for expensive j."""
    if not cls.expensive[j]:
        raise CirculationError(f"vertex {j} is not expensive")
    fin = sum(
        (f_of_x(sol.x[t.back_edges[p][2]], c2) for p in cls.incoming_back[j]),
        ZERO,
    )
    return fin - ONE - sol.excess[j]


def _fix_up(g, sol, t, cls, b, amount_of):
    """Satisfy every LP-unsatisfied vertex by raising covering edges.

    For each LP-unsatisfied vertex j in DFS preorder whose cut is still
    short, the covering edge with maximum current value (ties by tail
    preorder) is raised by amount_of(j), capped at 1; if the cap leaves
    the cut short, further covering edges are raised greedily until it
    closes.  Returns (payments, repairs, excess_payment).
    """
    payments: dict[int, Q] = {}
    repairs = 0
    excess_total = ZERO
    order = sorted(cls.unsat_cut, key=lambda v: t.pre[v])
    for j in order:
        _, child = cls.unsat_cut[j]
        cov = cls.covers[child]
        deficit = ONE - sum((b[p] for p in cov), ZERO)
        if deficit <= 0:
            continue  # an earlier fix-up already closed this cut
        amount = amount_of(j)
        spent = ZERO

        def pick():
            cands = [p for p in cov if b[p] < ONE]
            if not cands:
                return None
            return max(cands, key=lambda p: (b[p], -t.pre[t.back_edges[p][0]]))

        p = pick()
        if p is not None:
            add = min(amount, ONE - b[p])
            b[p] += add
            spent += add
            deficit -= add
        while deficit > 0:
            p = pick()
            if p is None:
                raise CirculationError(
                    f"cut at vertex {j} cannot be satisfied: cover "
                    f"capacity below 1 (would contradict the cut arithmetic)"
                )
            add = min(deficit, ONE - b[p])
            b[p] += add
            spent += add
            deficit -= add
        payments[j] = spent
        if spent > amount:
            repairs += 1
            excess_total += spent - amount
    return payments, repairs, excess_total


def _assert_feasible(t, cls, b, method):
    for v in cls.internal_vertices:
        if not is_satisfied_by(t, b, v, covers=cls.covers):
            raise CirculationError(
                f"{method}: internal vertex {v} unsatisfied after fix-up"
            )


def x_circulation(
    g: Graph, sol: LpSolution, t: DfsTree, cls: VertexClassification
) -> Circulation:
    b = [sol.x[ei] for (_, _, ei) in t.back_edges]
    pre_cost = cost(t, cls, b)
    payments, repairs, excess = _fix_up(
        g, sol, t, cls, b, lambda j: sol.excess[j] / 2
    )
    _assert_feasible(t, cls, b, "x-circulation")
    return Circulation(
        method="X",
        b=tuple(b),
        vertex_cost=vertex_costs(t, cls, b),
        total_cost=cost(t, cls, b),
        pre_fixup_cost=pre_cost,
        payments=payments,
        repairs=repairs,
        excess_payment=excess,
    )


def f_circulation(
    g: Graph,
    sol: LpSolution,
    t: DfsTree,
    cls: VertexClassification,
    c2: Q = ZERO,
) -> Circulation:
    b = f_values(sol, t, c2)
    for v in cls.internal_vertices:
        if cls.lp_satisfied[v] and not is_satisfied_by(
            t, b, v, covers=cls.covers
        ):
            raise InternalInconsistency(
                f"rounding broke an LP-satisfied vertex: {v}"
            )
    pre_cost = cost(t, cls, b)
    c2 = Q(c2)
    payments, repairs, excess = _fix_up(
        g, sol, t, cls, b, lambda j: (ONE + c2 / 2) * sol.excess[j]
    )
    _assert_feasible(t, cls, b, "f-circulation")
    return Circulation(
        method=f"F({qstr(c2)})" if c2 else "F",
        b=tuple(b),
        vertex_cost=vertex_costs(t, cls, b),
        total_cost=cost(t, cls, b),
        pre_fixup_cost=pre_cost,
        payments=payments,
        repairs=repairs,
        excess_payment=excess,
    )


def best_circulation(
    g: Graph, sol: LpSolution, t: DfsTree, cls: VertexClassification
) -> tuple[Circulation, Circulation, Circulation]:
    """(best, x-circ, f-circ); ties go to the rounded construction."""
    cx = x_circulation(g, sol, t, cls)
    cf = f_circulation(g, sol, t, cls)
    if cx.total_cost + cx.total_payments < cf.total_cost + cf.total_payments:
        winner = cx
    else:
        winner = cf
    best = Circulation(
        method="BEST",
        b=winner.b,
        vertex_cost=winner.vertex_cost,
        total_cost=winner.total_cost,
        pre_fixup_cost=winner.pre_fixup_cost,
        payments=winner.payments,
        repairs=winner.repairs,
        excess_payment=winner.excess_payment,
    )
    return best, cx, cf


def half_circulation(t: DfsTree, cls: VertexClassification) -> Circulation:
    """b == 1/2 everywhere; infeasibility is reported, not fatal."""
    b = [HALF] * len(t.back_edges)
    feasible = all(
        is_satisfied_by(t, b, v, covers=cls.covers)
        for v in cls.internal_vertices
    )
    return Circulation(
        method="HALF",
        b=tuple(b),
        vertex_cost=vertex_costs(t, cls, b),
        total_cost=cost(t, cls, b),
        pre_fixup_cost=cost(t, cls, b),
        feasible=feasible,
    )


def oracle_min_circulation(
    t: DfsTree, cls: VertexClassification
) -> Circulation:
    """Exact minimum of the cost functional over all feasible valuations.

    LP: minimize sum of per-expensive-vertex overflows subject to every
    internal tree cut's cover summing to >= 1 and 0 <= b <= 1.
    """
    nb = len(t.back_edges)
    exp = cls.expensive_vertices
    nt = len(exp)
    tvar = {j: nb + k for k, j in enumerate(exp)}

    rows = []
    rhs = []
    for v in cls.internal_vertices:
        for c in t.children[v]:
            cov = cls.covers[c]
            if not cov:
                raise CirculationError(
                    f"tree cut at ({v},{c}) has an empty cover; "
                    f"the input support cannot be 2-vertex connected"
                )
            rows.append({p: ONE for p in cov})
            rhs.append(ONE)
    t_row_start = len(rows)
    for j in exp:
        row = {p: -ONE for p in cls.incoming_back[j]}
        row[tvar[j]] = ONE
        rows.append(row)
        rhs.append(-ONE)

    m = nb + nt
    basis = [m + i for i in range(t_row_start)]
    basis += [tvar[j] for j in exp]
    res = simplex.solve_min(
        [ZERO] * nb + [ONE] * nt,
        rows,
        rhs,
        upper=[ONE] * nb + [None] * nt,
        basis=basis,
        at_upper=set(range(nb)),
    )
    b = res.x[:nb]
    vc = vertex_costs(t, cls, b)
    total = sum(vc.values(), ZERO)
    if total != res.value:
        raise InternalInconsistency(
            f"oracle LP value {res.value} != recomputed cost {total}"
        )
    _assert_feasible(t, cls, b, "oracle circulation")
    return Circulation(
        method="ORACLE",
        b=tuple(b),
        vertex_cost=vc,
        total_cost=total,
        pre_fixup_cost=total,
    )
