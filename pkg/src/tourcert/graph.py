"""Undirected graph representation, structural predicates, instance
generation, and the brute-force graph-TSP oracle.

Vertices are dense integer ids 0..n-1.  Edges are unordered pairs
stored as (u, v) with u < v; adjacency lists hold edge indices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(compare=False)

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        """Build a simple graph; rejects loops, duplicates, bad vertex ids."""
        norm = []
        seen = set()
        for (u, v) in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex id out of range in edge ({u},{v})")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"parallel edge ({e[0]},{e[1]})")
            seen.add(e)
            norm.append(e)
        adj = [[] for _ in range(n)]
        for idx, (u, v) in enumerate(norm):
            adj[u].append(idx)
            adj[v].append(idx)
        return Graph(n, tuple(norm), tuple(tuple(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def other_end(self, edge_idx: int, v: int) -> int:
        u, w = self.edges[edge_idx]
        return w if v == u else u

    def neighbors(self, v: int):
        return [self.other_end(e, v) for e in self.adjacency[v]]


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: first line "n m", then m lines "u v"."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"bad header line: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise GraphError(f"header says {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise GraphError(f"edge line must have u < v: {ln!r}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out += [f"{u} {v}" for (u, v) in g.edges]
    return "\n".join(out) + "\n"


def is_subquartic(g: Graph) -> bool:
    return all(g.degree(v) <= 4 for v in range(g.n))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n


def _lowlink(g: Graph):
    """Iterative DFS low-link pass.

    Returns (order, low, parent_edge, cut_vertex flags, bridge flags).
    """
    n = g.n
    order = [-1] * n
    low = [0] * n
    parent_edge = [-1] * n
    is_cut = [False] * n
    is_bridge = [False] * g.m
    timer = 0
    for root in range(n):
        if order[root] != -1:
            continue
        root_children = 0
        stack = [(root, iter(g.adjacency[root]))]
        order[root] = low[root] = timer
        timer += 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for ei in it:
                w = g.other_end(ei, v)
                if order[w] == -1:
                    parent_edge[w] = ei
                    if v == root:
                        root_children += 1
                    order[w] = low[w] = timer
                    timer += 1
                    stack.append((w, iter(g.adjacency[w])))
                    advanced = True
                    break
                elif ei != parent_edge[v]:
                    low[v] = min(low[v], order[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= order[p] and p != root:
                        is_cut[p] = True
                    if low[v] > order[p]:
                        is_bridge[parent_edge[v]] = True
        is_cut[root] = root_children >= 2
    return order, low, parent_edge, is_cut, is_bridge


def cut_vertices(g: Graph) -> list[int]:
    _, _, _, is_cut, _ = _lowlink(g)
    return [v for v in range(g.n) if is_cut[v]]


def is_two_vertex_connected(g: Graph) -> bool:
    """Connected with no cut vertex.  Requires n >= 3."""
    if g.n < 3:
        raise GraphError("2-vertex-connectivity needs n >= 3")
    if not is_connected(g):
        return False
    return not any(_lowlink(g)[3])


def is_two_edge_connected(g: Graph) -> bool:
    if not is_connected(g):
        return False
    return not any(_lowlink(g)[4])


def biconnected_blocks(g: Graph) -> list[list[int]]:
    """Edge-partition into biconnected components (lists of edge indices)."""
    n = g.n
    order = [-1] * n
    low = [0] * n
    parent_edge = [-1] * n
    timer = 0
    blocks: list[list[int]] = []
    estack: list[int] = []
    for root in range(n):
        if order[root] != -1:
            continue
        stack = [(root, iter(g.adjacency[root]))]
        order[root] = low[root] = timer
        timer += 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for ei in it:
                w = g.other_end(ei, v)
                if order[w] == -1:
                    parent_edge[w] = ei
                    estack.append(ei)
                    order[w] = low[w] = timer
                    timer += 1
                    stack.append((w, iter(g.adjacency[w])))
                    advanced = True
                    break
                elif ei != parent_edge[v] and order[w] < order[v]:
                    estack.append(ei)
                    low[v] = min(low[v], order[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if low[v] >= order[p]:
                        block = []
                        while True:
                            e = estack.pop()
                            block.append(e)
                            if e == parent_edge[v]:
                                break
                        blocks.append(block)
    return blocks


def generate_random_subquartic(
    n: int, seed: int, sparsity: float = 0.0, retries: int = 10000
) -> Graph:
    """Random simple 2-vertex-connected graph with max degree 4.

    Configuration-model 4-regular with rejection of loops, multi-edges
    and non-2VC samples; `sparsity` then deletes up to sparsity*m random
    edges, each deletion kept only if 2-vertex-connectivity survives.
    Deterministic per seed.
    """
    if n < 5:
        raise GraphError("n must be >= 5")
    if n % 2 != 0:
        raise GraphError("n must be even for the 4-regular pairing")
    if not (0.0 <= sparsity <= 1.0):
        raise GraphError("sparsity must lie in [0, 1]")
    rng = random.Random(seed)
    g = None
    for _ in range(retries):
        stubs = list(range(n)) * 4
        rng.shuffle(stubs)
        seen = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in seen:
                ok = False
                break
            seen.add(e)
        if not ok:
            continue
        cand = Graph.from_edges(n, sorted(seen))
        if is_two_vertex_connected(cand):
            g = cand
            break
    if g is None:
        raise GraphError(f"rejection budget exhausted after {retries} tries")
    if sparsity > 0.0:
        target = int(sparsity * g.m)
        order = list(range(g.m))
        rng.shuffle(order)
        kept = set(range(g.m))
        removed = 0
        for ei in order:
            if removed >= target:
                break
            trial = [g.edges[i] for i in sorted(kept - {ei})]
            cand = Graph.from_edges(n, trial)
            if is_two_vertex_connected(cand):
                kept.remove(ei)
                removed += 1
        g = Graph.from_edges(n, [g.edges[i] for i in sorted(kept)])
    return g


def subdivide_edges(g: Graph, fraction: float, seed: int = 0) -> Graph:
    """Replace a random `fraction` of edges by length-2 paths through
    fresh degree-2 vertices.  Preserves 2-connectivity and max degree;
    deterministic per seed."""
    if not (0.0 <= fraction <= 1.0):
        raise GraphError("fraction must lie in [0, 1]")
    rng = random.Random(seed)
    chosen = [ei for ei in range(g.m) if rng.random() < fraction]
    pick = set(chosen)
    edges = []
    nxt = g.n
    for ei, (u, v) in enumerate(g.edges):
        if ei in pick:
            edges.append(tuple(sorted((u, nxt))))
            edges.append(tuple(sorted((nxt, v))))
            nxt += 1
        else:
            edges.append((u, v))
    return Graph.from_edges(nxt, sorted(edges))


@dataclass(frozen=True)
class TourOracleResult:
    opt_len: int
    multiplicity: tuple[int, ...]


MAX_ORACLE_EDGES = 16


def brute_force_graph_tsp(g: Graph) -> TourOracleResult:
    """Exact minimum-edge spanning connected Eulerian multigraph.

    Minimizes over edge supports S (connected, spanning) plus a minimum
    parity-correcting doubled set inside S; multiplicity 2 always
    suffices.  Refuses |E| > 16.
    """
    m = g.m
    n = g.n
    if m > MAX_ORACLE_EDGES:
        raise GraphError(f"brute-force oracle capped at |E| <= {MAX_ORACLE_EDGES}")
    if n == 0 or not is_connected(g):
        raise GraphError("oracle needs a connected graph")
    if n == 1:
        return TourOracleResult(0, tuple([0] * m))

    # Baseline witness: doubled spanning tree.
    tree = _spanning_tree_edges(g)
    best_len = 2 * len(tree)
    best_mult = [0] * m
    for e in tree:
        best_mult[e] = 2

    masks = sorted(range(1, 1 << m), key=lambda x: x.bit_count())
    for mask in masks:
        size = mask.bit_count()
        if size >= best_len:
            break
        if size < n - 1:
            continue
        adj = [[] for _ in range(n)]
        for ei in range(m):
            if mask >> ei & 1:
                u, v = g.edges[ei]
                adj[u].append((v, ei))
                adj[v].append((u, ei))
        if any(not a for a in adj):
            continue
        deg_odd = [len(a) % 2 == 1 for a in adj]
        t_set = [v for v in range(n) if deg_odd[v]]
        if size + len(t_set) // 2 >= best_len:
            continue
        if not _mask_connected(adj, n):
            continue
        join = _min_t_join(adj, n, t_set)
        if join is None:
            continue
        total = size + len(join)
        if total < best_len:
            best_len = total
            best_mult = [0] * m
            for ei in range(m):
                if mask >> ei & 1:
                    best_mult[ei] = 1
            for ei in join:
                best_mult[ei] = 2
    return TourOracleResult(best_len, tuple(best_mult))


def _spanning_tree_edges(g: Graph) -> list[int]:
    seen = [False] * g.n
    seen[0] = True
    out = []
    stack = [0]
    while stack:
        v = stack.pop()
        for ei in g.adjacency[v]:
            w = g.other_end(ei, v)
            if not seen[w]:
                seen[w] = True
                out.append(ei)
                stack.append(w)
    return out


def _mask_connected(adj, n) -> bool:
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for (w, _) in adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == n


def _min_t_join(adj, n, t_set):
    """Minimum-cardinality T-join in the (connected) support graph.

    Returns the edge set (symmetric difference of shortest paths along a
    minimum-cost perfect matching of T under shortest-path distance).
    """
    if not t_set:
        return []
    k = len(t_set)
    # BFS from each T vertex: distance + predecessor edge for path recovery.
    dist = {}
    pred = {}
    for s in t_set:
        d = [-1] * n
        p = [(-1, -1)] * n  # (prev vertex, via edge)
        d[s] = 0
        queue = [s]
        while queue:
            nxt = []
            for v in queue:
                for (w, ei) in adj[v]:
                    if d[w] == -1:
                        d[w] = d[v] + 1
                        p[w] = (v, ei)
                        nxt.append(w)
            queue = nxt
        dist[s] = d
        pred[s] = p

    # Min-cost perfect matching on T by bitmask DP.
    full = (1 << k) - 1
    INF = float("inf")
    dp = [INF] * (1 << k)
    choice = [None] * (1 << k)
    dp[0] = 0
    for state in range(1 << k):
        if dp[state] == INF:
            continue
        try:
            i = next(b for b in range(k) if not state >> b & 1)
        except StopIteration:
            continue
        for j in range(i + 1, k):
            if state >> j & 1:
                continue
            d = dist[t_set[i]][t_set[j]]
            ns = state | 1 << i | 1 << j
            if dp[state] + d < dp[ns]:
                dp[ns] = dp[state] + d
                choice[ns] = (state, i, j)
    if dp[full] == INF:
        return None
    # Recover matched pairs, XOR their shortest paths.
    join: set[int] = set()
    state = full
    while state:
        prev, i, j = choice[state]
        v = t_set[j]
        src = t_set[i]
        while v != src:
            pv, ei = pred[src][v]
            join ^= {ei}
            v = pv
        state = prev
    return sorted(join)
