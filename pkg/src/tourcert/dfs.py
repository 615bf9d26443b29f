"""Greedy DFS tree, back-edge orientation, tree cuts, and the vertex
classification (internal / branch / expensive / heavy / LP-satisfied).

Every structural claim the downstream cost analysis leans on is checked
at classification time and raises InternalInconsistency when violated:
these are theorems, so a violation indicts the code upstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import Graph
from .lp import InternalInconsistency, LpSolution
from .rational import ONE, Q, ZERO


@dataclass(frozen=True)
class DfsTree:
    root: int
    parent: tuple  # parent vertex, -1 at root
    parent_edge: tuple  # graph edge index of (parent, v), -1 at root
    pre: tuple
    post: tuple
    children: tuple  # per-vertex child tuple, in visit order
    back_edges: tuple  # (tail, head, graph edge index), tail descendant

    @property
    def n(self) -> int:
        return len(self.parent)

    def is_ancestor(self, a: int, v: int) -> bool:
        """True iff a is an ancestor of v (reflexive)."""
        return self.pre[a] <= self.pre[v] and self.post[v] <= self.post[a]

    def in_subtree(self, v: int, w: int) -> bool:
        return self.is_ancestor(w, v)

    def tree_edges(self):
        return [
            (self.parent[v], v) for v in range(self.n) if self.parent[v] != -1
        ]

    def to_json(self, flags: dict | None = None) -> str:
        doc = {
            "root": self.root,
            "parent": list(self.parent),
            "back_edges": [[i, j] for (i, j, _) in self.back_edges],
        }
        if flags:
            doc["flags"] = flags
        return json.dumps(doc)


def choose_root(g: Graph, sol: LpSolution) -> int:
    """Endpoint (lowest id) of some fractional edge; 0 when the graph is
    a Hamiltonian cycle of 1-edges."""
    candidates = [
        w for (u, v), xe in zip(g.edges, sol.x) if xe < ONE for w in (u, v)
    ]
    if not candidates:
        return 0
    return min(candidates)


def build_greedy_dfs(g: Graph, sol: LpSolution, root: int) -> DfsTree:
    """Depth-first search preferring the highest-x edge at each step;
    ties broken toward the smaller vertex id."""
    n = g.n
    if not (0 <= root < n):
        raise ValueError(f"root {root} out of range")
    parent = [-1] * n
    parent_edge = [-1] * n
    pre = [-1] * n
    post = [-1] * n
    children = [[] for _ in range(n)]
    timer = 0
    stack = [root]
    pre[root] = timer
    timer += 1
    while stack:
        v = stack[-1]
        best = None
        for ei in g.adjacency[v]:
            w = g.other_end(ei, v)
            if pre[w] == -1:
                key = (sol.x[ei], -w)
                if best is None or key > best[0]:
                    best = (key, w, ei)
        if best is None:
            post[v] = timer
            timer += 1
            stack.pop()
            continue
        _, w, ei = best
        parent[w] = v
        parent_edge[w] = ei
        children[v].append(w)
        pre[w] = timer
        timer += 1
        stack.append(w)

    back = []
    tree_edge_ids = {parent_edge[v] for v in range(n) if parent_edge[v] != -1}
    for ei, (u, v) in enumerate(g.edges):
        if ei in tree_edge_ids:
            continue
        # descendant end has the larger preorder stamp
        i, j = (u, v) if pre[u] > pre[v] else (v, u)
        back.append((i, j, ei))
    back.sort(key=lambda t: (pre[t[0]], pre[t[1]]))
    t = DfsTree(
        root=root,
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        pre=tuple(pre),
        post=tuple(post),
        children=tuple(tuple(cs) for cs in children),
        back_edges=tuple(back),
    )
    for (i, j, ei) in back:
        if not (t.is_ancestor(j, i) and i != j):
            raise InternalInconsistency(
                f"non-tree edge ({i},{j}) is not a back edge"
            )
    return t


def greedy_audit(g: Graph, sol: LpSolution, t: DfsTree) -> bool:
    """Replay the DFS: each tree edge taken must carry the maximum
    x-value among edges to then-unvisited neighbors."""
    order = sorted(range(g.n), key=lambda v: t.pre[v])
    visited_at = {v: t.pre[v] for v in order}
    for v in range(g.n):
        for c in t.children[v]:
            taken = sol.x[t.parent_edge[c]]
            for ei in g.adjacency[v]:
                w = g.other_end(ei, v)
                if visited_at[w] > visited_at[c] and sol.x[ei] > taken:
                    return False
    return True


def tree_cut_cover(t: DfsTree, cut_edge: tuple[int, int]) -> list[int]:
    """Positions (into t.back_edges) of the back edges covering the tree
    cut of cut_edge=(u,v): tail in subtree(v), head a proper ancestor
    of u."""
    u, v = cut_edge
    if t.parent[v] != u:
        raise ValueError(f"({u},{v}) is not a tree edge")
    out = []
    for pos, (w, z, _) in enumerate(t.back_edges):
        if t.in_subtree(w, v) and t.is_ancestor(z, u) and z != u:
            out.append(pos)
    return out


def is_satisfied_by(t: DfsTree, b, v: int, covers=None) -> bool:
    """True iff each outgoing tree-edge cut of v has cover b-mass >= 1.

    b: per-back-edge values indexed like t.back_edges.
    """
    for c in t.children[v]:
        cov = covers[c] if covers is not None else tree_cut_cover(t, (v, c))
        if sum((b[p] for p in cov), ZERO) < ONE:
            return False
    return True


def all_covers(t: DfsTree) -> dict:
    """Materialized cover lists keyed by the child vertex of each tree
    edge."""
    return {
        v: tree_cut_cover(t, (t.parent[v], v))
        for v in range(t.n)
        if t.parent[v] != -1
    }


@dataclass(frozen=True)
class VertexClassification:
    internal: tuple
    branch: tuple
    expensive: tuple
    heavy: tuple
    lp_satisfied: tuple
    unsat_cut: dict  # LP-unsatisfied vertex -> (v, child) tree edge
    x_min: dict  # expensive vertex -> Q
    x_max: dict
    incoming_back: tuple  # per-vertex positions into back_edges
    covers: dict  # child vertex -> cover positions

    @property
    def expensive_vertices(self):
        return [v for v, f in enumerate(self.expensive) if f]

    @property
    def internal_vertices(self):
        return [v for v, f in enumerate(self.internal) if f]


def classify(
    g: Graph, sol: LpSolution, t: DfsTree, collect: list | None = None
) -> VertexClassification:
    """Classify vertices and verify the structural invariants.

    With collect=None a violation raises InternalInconsistency; passing a
    list records violation messages there instead (for certification).
    """
    n = g.n
    internal = tuple(
        v != t.root and len(t.children[v]) > 0 for v in range(n)
    )
    branch = tuple(len(t.children[v]) >= 2 for v in range(n))
    incoming = [[] for _ in range(n)]
    for pos, (_, j, _) in enumerate(t.back_edges):
        incoming[j].append(pos)
    expensive = tuple(
        internal[v] and len(incoming[v]) == 2 for v in range(n)
    )
    heavy = tuple(sol.excess[v] > 0 for v in range(n))

    covers = all_covers(t)
    b = [sol.x[ei] for (_, _, ei) in t.back_edges]
    lp_sat = [True] * n
    unsat_cut: dict[int, tuple[int, int]] = {}
    for v in range(n):
        if not internal[v]:
            continue
        bad = [
            c
            for c in t.children[v]
            if sum((b[p] for p in covers[c]), ZERO) < ONE
        ]
        if len(bad) > 1:
            msg = (
                f"tree-cut satisfaction: vertex {v} has {len(bad)} "
                f"unsatisfied outgoing cuts (more than one)"
            )
            if collect is None:
                raise InternalInconsistency(msg)
            collect.append(msg)
        if bad:
            lp_sat[v] = False
            unsat_cut[v] = (v, bad[0])

    x_min: dict[int, Q] = {}
    x_max: dict[int, Q] = {}
    for v in range(n):
        if expensive[v]:
            vals = sorted(sol.x[t.back_edges[p][2]] for p in incoming[v])
            x_min[v], x_max[v] = vals[0], vals[1]

    cls = VertexClassification(
        internal=internal,
        branch=branch,
        expensive=expensive,
        heavy=heavy,
        lp_satisfied=tuple(lp_sat),
        unsat_cut=unsat_cut,
        x_min=x_min,
        x_max=x_max,
        incoming_back=tuple(tuple(i) for i in incoming),
        covers=covers,
    )
    _check_classification(g, sol, t, cls, collect)
    return cls


def _check_classification(g, sol, t, cls, collect=None):
    def fail(msg):
        if collect is None:
            raise InternalInconsistency(msg)
        collect.append(msg)

    n = g.n
    max_deg = max(g.degree(v) for v in range(n))
    for v in range(n):
        if max_deg <= 4 and cls.branch[v] and cls.internal[v] and cls.expensive[v]:
            fail(
                f"branch-not-expensive: internal branch vertex {v} is expensive"
            )
        if cls.expensive[v] and not cls.lp_satisfied[v]:
            fail(f"expensive-implies-satisfied: vertex {v}")
        if cls.internal[v] and not cls.lp_satisfied[v] and not cls.heavy[v]:
            fail(f"unsatisfied-implies-heavy: vertex {v} has zero excess")
    if 2 * len(cls.expensive_vertices) > n:
        fail(f"expensive-count: {len(cls.expensive_vertices)} > n/2")
