"""End-to-end certification: run the pipeline, check every structural
claim, and bound the tour length.

Checks never abort a run; failures become first-class certificate data
with witnesses.  A certificate bundles the LP facts, the circulation
costs, the named check verdicts, and the final tour-length ratio.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import circulation as circ
from . import dfs, lp, simplex
from .graph import (
    Graph,
    biconnected_blocks,
    brute_force_graph_tsp,
    generate_random_subquartic,
)
from .rational import ONE, Q, TWO, ZERO, qstr

RATIO_LIMIT = Q(46, 33)


@dataclass
class Check:
    passed: bool
    witness: str | None = None


@dataclass
class Certificate:
    instance_id: str
    n: int
    m: int
    value: Q | None = None
    eps: Q | None = None
    restrict_rounds: int = 0
    block_split: bool = False
    blocks: int = 1
    checks: dict = field(default_factory=dict)
    costs: dict = field(default_factory=dict)  # method -> Q
    payments: dict = field(default_factory=dict)
    repairs: dict = field(default_factory=dict)
    half_feasible: bool | None = None
    root_term: Q = TWO
    tour_bound: Q | None = None
    ratio: Q | None = None
    opt_tsp: int | None = None

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        def q(v):
            return None if v is None else qstr(v)

        return {
            "instance_id": self.instance_id,
            "n": self.n,
            "m": self.m,
            "value": q(self.value),
            "eps": q(self.eps),
            "restrict_rounds": self.restrict_rounds,
            "block_split": self.block_split,
            "blocks": self.blocks,
            "checks": {
                name: {"pass": c.passed, "witness": c.witness}
                for name, c in self.checks.items()
            },
            "costs": {k: q(v) for k, v in self.costs.items()},
            "payments": {k: q(v) for k, v in self.payments.items()},
            "repairs": dict(self.repairs),
            "half_feasible": self.half_feasible,
            "root_term": q(self.root_term),
            "tour_bound": q(self.tour_bound),
            "ratio": q(self.ratio),
            "opt_tsp": self.opt_tsp,
            "all_checks_pass": self.all_pass,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "Certificate":
        d = json.loads(text)

        def q(v):
            return None if v is None else Q(v)

        return Certificate(
            instance_id=d["instance_id"],
            n=d["n"],
            m=d["m"],
            value=q(d["value"]),
            eps=q(d["eps"]),
            restrict_rounds=d["restrict_rounds"],
            block_split=d["block_split"],
            blocks=d["blocks"],
            checks={
                k: Check(v["pass"], v["witness"])
                for k, v in d["checks"].items()
            },
            costs={k: q(v) for k, v in d["costs"].items()},
            payments={k: q(v) for k, v in d["payments"].items()},
            repairs=d["repairs"],
            half_feasible=d["half_feasible"],
            root_term=q(d["root_term"]),
            tour_bound=q(d["tour_bound"]),
            ratio=q(d["ratio"]),
            opt_tsp=d["opt_tsp"],
        )


def instance_hash(g: Graph) -> str:
    body = f"{g.n}:" + ",".join(f"{u}-{v}" for u, v in g.edges)
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def certify(
    g: Graph, root_term: Q = TWO, c2: Q = ZERO, with_opt_tsp: bool = True
) -> Certificate:
    """Full pipeline on one instance; never raises on a failed check."""
    cert = Certificate(instance_id=instance_hash(g), n=g.n, m=g.m)
    cert.root_term = Q(root_term)

    try:
        sol = lp.solve_lp(g)
    except lp.LpError as exc:
        cert.checks["lp_solved"] = Check(False, str(exc))
        return cert
    cert.checks["lp_solved"] = Check(True)

    stats: dict = {}
    try:
        gs, sol = lp.restrict_to_support(g, sol, stats)
    except lp.LpError as exc:
        cert.checks["support_restriction"] = Check(False, str(exc))
        return cert
    cert.checks["support_restriction"] = Check(True)
    cert.restrict_rounds = stats.get("restrict_rounds", 0)
    cert.value = sol.value
    cert.eps = sol.eps

    # Lemma-2 style normalization must be a no-op preserving everything.
    try:
        before = sol.value
        sol = lp.normalize_below_one(gs, sol)
        ok = all(xe <= ONE for xe in sol.x) and sol.value == before
        cut_w, _ = lp.min_cut_of_solution(gs, sol.x)
        ok = ok and cut_w >= TWO
        cert.checks["normalized_below_one"] = Check(
            ok, None if ok else f"value {before} -> {sol.value}, cut {cut_w}"
        )
    except lp.LpError as exc:
        cert.checks["normalized_below_one"] = Check(False, str(exc))
        return cert

    _lp_checks(cert, gs, sol)

    blocks = biconnected_blocks(gs)
    if len(blocks) == 1:
        _certify_block(cert, gs, sol, c2, prefix="")
    else:
        cert.block_split = True
        cert.blocks = len(blocks)
        _certify_split(cert, gs, blocks, c2)

    # Tour bound from the best circulation via the spanning-Eulerian-
    # multigraph black box: 4n/3 + (2/3) * (cost + payments + root term).
    c_best = cert.costs.get("best")
    if c_best is not None:
        load = c_best + cert.payments.get("best", ZERO) + cert.root_term
        cert.tour_bound = Q(4 * cert.n, 3) + Q(2, 3) * load
        cert.ratio = cert.tour_bound / cert.value
        zero_root_load = c_best + cert.payments.get("best", ZERO)
        bound0 = Q(4 * cert.n, 3) + Q(2, 3) * zero_root_load
        ok = bound0 / cert.value <= RATIO_LIMIT
        cert.checks["ratio_at_most_46_33"] = Check(
            ok, None if ok else f"root-free ratio {bound0 / cert.value}"
        )

    if with_opt_tsp and g.m <= 16:
        try:
            oracle = brute_force_graph_tsp(g)
            cert.opt_tsp = oracle.opt_len
            if cert.tour_bound is not None:
                ok = Q(cert.opt_tsp) <= cert.tour_bound
                cert.checks["tour_bound_dominates_optimum"] = Check(
                    ok,
                    None
                    if ok
                    else f"opt {cert.opt_tsp} > bound {cert.tour_bound}",
                )
        except Exception as exc:  # oracle refusal is not a check failure
            cert.checks["tsp_oracle_ran"] = Check(False, str(exc))
    return cert


def _lp_checks(cert: Certificate, g: Graph, sol: lp.LpSolution):
    ok = len(sol.support()) <= 2 * g.n - 1
    cert.checks["support_at_most_2n_minus_1"] = Check(
        ok, None if ok else f"support {len(sol.support())}, n {g.n}"
    )
    ok = ZERO <= sol.eps <= ONE
    cert.checks["eps_in_unit_interval"] = Check(
        ok, None if ok else f"eps {sol.eps}"
    )
    bad = [v for v in range(g.n) if sol.excess[v] < 0]
    cert.checks["excess_nonnegative"] = Check(
        not bad, None if not bad else f"vertices {bad[:5]}"
    )
    total = sum(sol.excess, ZERO)
    ok = total == 2 * sol.eps * g.n
    cert.checks["excess_sum_identity"] = Check(
        ok, None if ok else f"sum {total} != {2 * sol.eps * g.n}"
    )
    cut_w, side = lp.min_cut_of_solution(g, sol.x)
    ok = cut_w >= TWO
    cert.checks["min_cut_at_least_two"] = Check(
        ok, None if ok else f"cut {cut_w} at {sorted(side)[:8]}"
    )
    # Optimality cross-check by full constraint enumeration at desk scale.
    if g.n <= 10:
        try:
            enum_val = lp.solve_lp_enumerated(g)
            ok = enum_val == sol.value
            cert.checks["value_matches_enumerated_lp"] = Check(
                ok, None if ok else f"{sol.value} != {enum_val}"
            )
        except lp.LpError as exc:
            cert.checks["value_matches_enumerated_lp"] = Check(False, str(exc))


def _certify_block(
    cert: Certificate, g: Graph, sol: lp.LpSolution, c2: Q, prefix: str
):
    """Tree, classification, circulations and all their checks for one
    2-vertex-connected support.  Costs/payments accumulate into cert."""

    def record(name, passed, witness=None):
        name = prefix + name
        if name in cert.checks and not cert.checks[name].passed:
            return  # keep the first failure witness
        if name in cert.checks:
            passed = passed and cert.checks[name].passed
        cert.checks[name] = Check(passed, witness)

    root = dfs.choose_root(g, sol)
    t = dfs.build_greedy_dfs(g, sol, root)

    record("back_edge_count", len(t.back_edges) == g.m - (g.n - 1))
    record("greedy_tree_audit", dfs.greedy_audit(g, sol, t))

    if sol.value == Q(g.n) and g.m > g.n:
        bad = [
            ei
            for (_, _, ei) in t.back_edges
            if sol.x[ei] == ONE
        ]
        record(
            "unit_edges_in_tree",
            not bad,
            None if not bad else f"unit back edges {bad[:5]}",
        )

    violations: list[str] = []
    cls = dfs.classify(g, sol, t, collect=violations)
    record(
        "classification_invariants",
        not violations,
        None if not violations else "; ".join(violations[:3]),
    )
    exp_ok = 2 * len(cls.expensive_vertices) <= g.n
    record(
        "expensive_at_most_half",
        exp_ok,
        None if exp_ok else f"{len(cls.expensive_vertices)} expensive, n {g.n}",
    )

    _per_vertex_checks(cert, record, g, sol, t, cls)

    built: dict[str, circ.Circulation] = {}
    try:
        best, cx, cf = circ.best_circulation(g, sol, t, cls)
        built = {"x": cx, "f": cf, "best": best}
        record("circulations_feasible", True)
    except (circ.CirculationError, lp.InternalInconsistency) as exc:
        record("circulations_feasible", False, str(exc))
    try:
        built["oracle"] = circ.oracle_min_circulation(t, cls)
        record("oracle_feasible", True)
    except (circ.CirculationError, lp.LpError, simplex.SimplexError) as exc:
        record("oracle_feasible", False, str(exc))

    half = circ.half_circulation(t, cls)
    if cert.half_feasible is None:
        cert.half_feasible = half.feasible
    else:
        cert.half_feasible = cert.half_feasible and half.feasible
    if sol.eps == ZERO and g.m > g.n:
        ok = half.feasible and half.total_cost == ZERO
        record(
            "half_zero_cost_when_value_n",
            ok,
            None
            if ok
            else f"feasible {half.feasible}, cost {half.total_cost}",
        )

    for name, c in built.items():
        cert.costs[name] = cert.costs.get(name, ZERO) + c.total_cost
        cert.payments[name] = (
            cert.payments.get(name, ZERO) + c.total_payments
        )
        cert.repairs[name] = cert.repairs.get(name, 0) + c.repairs

    if not built:
        return
    cx, cf, best, om = built["x"], built["f"], built["best"], built.get("oracle")

    if om is not None:
        ok = om.total_cost <= min(cx.total_cost, cf.total_cost, best.total_cost)
        record(
            "oracle_dominance",
            ok,
            None if ok else f"oracle {om.total_cost} vs x {cx.total_cost} f {cf.total_cost}",
        )

    n, eps = g.n, sol.eps
    sum_eps_int = sum((sol.excess[v] for v in cls.internal_vertices), ZERO)
    for tag, c, frac in (("x", cx, Q(n, 6)), ("f", cf, Q(n, 8)), ("best", best, Q(n, 11))):
        lhs = c.total_cost + c.total_payments
        rhs = frac + 2 * eps * n
        record(
            f"aggregate_bound_{tag}",
            lhs <= rhs,
            None if lhs <= rhs else f"{lhs} > {rhs}",
        )
    # Analytic decomposition dominates the constructed cost.
    for tag, c, cfun in (
        ("x", cx, lambda j: circ.c_x(j, sol, cls)),
        ("f", cf, lambda j: circ.c_f(j, sol, t, cls)),
    ):
        analytic = (
            sum(
                (max(ZERO, cfun(j)) for j in cls.expensive_vertices), ZERO
            )
            + sum_eps_int
        )
        ok = c.total_cost <= analytic
        record(
            f"construction_within_analytic_{tag}",
            ok,
            None if ok else f"{c.total_cost} > {analytic}",
        )
    # Payment accounting versus the theory, when no cap repair fired.
    if cx.repairs == 0:
        budget = sum(
            (
                sol.excess[v] / 2
                for v in cls.internal_vertices
                if not cls.expensive[v]
            ),
            ZERO,
        )
        record(
            "payments_within_budget_x",
            cx.total_payments <= budget,
            None
            if cx.total_payments <= budget
            else f"{cx.total_payments} > {budget}",
        )
    if cf.repairs == 0:
        budget = sum(
            (
                sol.excess[v]
                for v in cls.internal_vertices
                if not cls.expensive[v]
            ),
            ZERO,
        )
        record(
            "payments_within_budget_f",
            cf.total_payments <= budget,
            None
            if cf.total_payments <= budget
            else f"{cf.total_payments} > {budget}",
        )
    # Averaged convex combination over expensive vertices.
    exp = cls.expensive_vertices
    if exp:
        k = len(exp)
        avg_x = sum(
            (max(ZERO, circ.c_x(j, sol, cls)) for j in exp), ZERO
        ) / k
        avg_f = sum(
            (max(ZERO, circ.c_f(j, sol, t, cls)) for j in exp), ZERO
        ) / k
        combo = Q(6, 11) * avg_x + Q(5, 11) * avg_f
        record(
            "convex_combination_at_most_2_11",
            combo <= Q(2, 11),
            None if combo <= Q(2, 11) else f"combo {combo}",
        )


def _per_vertex_checks(cert, record, g, sol, t, cls):
    bad: list[str] = []
    for j in cls.expensive_vertices:
        xmin, xmax, ej = cls.x_min[j], cls.x_max[j], sol.excess[j]
        if 2 * xmax + xmin > 2 + ej:
            bad.append(f"greedy inequality at {j}")
        cxj = circ.c_x(j, sol, cls)
        if cxj > min(xmin / 2 - ej / 2, ONE - xmin):
            bad.append(f"x-cost pair bound at {j}")
        if cxj > Q(1, 3):
            bad.append(f"x-cost 1/3 bound at {j}")
        cfj = circ.c_f(j, sol, t, cls)
        if xmin >= Q(1, 2) or xmax <= Q(3, 4):
            if cfj > ZERO:
                bad.append(f"f-cost nonpositive case at {j}")
        elif cfj > min(xmin, Q(1, 2) - xmin):
            bad.append(f"f-cost pair bound at {j}")
        if cfj > Q(1, 4):
            bad.append(f"f-cost 1/4 bound at {j}")
        if min(cxj, cfj) > Q(1, 4):
            bad.append(f"pointwise min bound at {j}")
    record(
        "per_vertex_cost_bounds",
        not bad,
        None if not bad else "; ".join(bad[:3]),
    )


def _certify_split(cert: Certificate, g: Graph, blocks, c2: Q):
    """Cut-vertex support: certify each biconnected block on its own
    re-solved LP and accumulate."""
    total_value = ZERO
    for edge_ids in blocks:
        verts = sorted({w for ei in edge_ids for w in g.edges[ei]})
        remap = {v: i for i, v in enumerate(verts)}
        bg = Graph.from_edges(
            len(verts),
            [(remap[g.edges[ei][0]], remap[g.edges[ei][1]]) for ei in edge_ids],
        )
        try:
            bsol = lp.solve_lp(bg)
            bg, bsol = lp.restrict_to_support(bg, bsol)
            bsol = lp.normalize_below_one(bg, bsol)
        except lp.LpError as exc:
            cert.checks["block_lp_solved"] = Check(False, str(exc))
            continue
        total_value += bsol.value
        _certify_block(cert, bg, bsol, c2, prefix="")
    ok = total_value == cert.value
    cert.checks["block_values_sum_to_total"] = Check(
        ok, None if ok else f"{total_value} != {cert.value}"
    )


def ratio_check(cert: Certificate) -> bool:
    """Exact tour-ratio inequality with the instance's own numbers,
    root contribution excluded."""
    if cert.costs.get("best") is None or cert.value is None:
        return False
    c = cert.costs["best"] + cert.payments.get("best", ZERO)
    bound = Q(4 * cert.n, 3) + Q(2, 3) * c
    return bound / cert.value <= RATIO_LIMIT


SWEEP_HEADER = (
    "instance,seed,n,m,eps,cost_x,cost_f,cost_best,cost_oracle,"
    "repairs,tour_bound,ratio,all_checks_pass"
)


@dataclass
class SweepSummary:
    rows: list
    certificates: list

    @property
    def max_ratio(self):
        ratios = [c.ratio for c in self.certificates if c.ratio is not None]
        return max(ratios) if ratios else None

    @property
    def total_repairs(self):
        return sum(sum(c.repairs.values()) for c in self.certificates)

    @property
    def all_pass(self):
        return all(c.all_pass for c in self.certificates)

    def to_csv(self) -> str:
        return "\n".join([SWEEP_HEADER] + self.rows) + "\n"


def sweep(
    count: int,
    n: int,
    seed: int,
    c2: Q = ZERO,
    sparsity: float = 0.0,
    root_term: Q = TWO,
    jobs: int = 1,
) -> SweepSummary:
    """Generate, certify and tabulate `count` instances.  Deterministic
    per seed; failed generation becomes an error row, not a crash."""
    seeds = [seed + i for i in range(count)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = list(
                pool.map(
                    _sweep_one,
                    [(s, n, sparsity, qstr(Q(c2)), qstr(Q(root_term))) for s in seeds],
                )
            )
    else:
        certs = [
            _sweep_one((s, n, sparsity, qstr(Q(c2)), qstr(Q(root_term))))
            for s in seeds
        ]
    rows = []
    kept = []
    for i, (s, cert_or_err) in enumerate(zip(seeds, certs)):
        if isinstance(cert_or_err, str):
            rows.append(f"{i},{s},{n},,,,,,,,,,generator-error:{cert_or_err}")
            continue
        cert = cert_or_err
        kept.append(cert)
        rows.append(
            ",".join(
                [
                    str(i),
                    str(s),
                    str(cert.n),
                    str(cert.m),
                    qstr(cert.eps) if cert.eps is not None else "",
                    _qcell(cert.costs.get("x")),
                    _qcell(cert.costs.get("f")),
                    _qcell(cert.costs.get("best")),
                    _qcell(cert.costs.get("oracle")),
                    str(sum(cert.repairs.values())),
                    _qcell(cert.tour_bound),
                    _qcell(cert.ratio),
                    str(cert.all_pass).lower(),
                ]
            )
        )
    return SweepSummary(rows=rows, certificates=kept)


def _qcell(v):
    return "" if v is None else qstr(v)


def _sweep_one(args):
    s, n, sparsity, c2s, root_s = args
    try:
        g = generate_random_subquartic(n, s, sparsity=sparsity)
    except Exception as exc:
        return str(exc)
    return certify(g, root_term=Q(root_s), c2=Q(c2s), with_opt_tsp=False)
