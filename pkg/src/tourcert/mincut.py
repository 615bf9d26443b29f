"""Exact minimum cuts on rationally-weighted graphs.

Stoer-Wagner for the global minimum cut (the LP separation oracle) and
Edmonds-Karp for s-t cuts (tight-cut searches during normalization).
Weights are gmpy2.mpq; comparisons are exact.
"""

from __future__ import annotations

from collections import deque

from .rational import Q, ZERO


def stoer_wagner(n: int, weighted_edges) -> tuple[Q, frozenset[int]]:
    """Global minimum cut of an undirected weighted graph.

    weighted_edges: iterable of (u, v, w) with w > 0.  Returns
    (cut weight, one side of the cut).  Requires n >= 2 and a connected
    weight graph (disconnected input returns a zero cut).
    """
    if n < 2:
        raise ValueError("min cut needs at least two vertices")
    w = [[ZERO] * n for _ in range(n)]
    for (u, v, wt) in weighted_edges:
        w[u][v] += wt
        w[v][u] += wt

    # merged[v]: original vertices currently contracted into v
    merged = [{v} for v in range(n)]
    active = list(range(n))
    best_w = None
    best_side: frozenset[int] = frozenset()
    while len(active) > 1:
        # maximum adjacency order
        a = [active[0]]
        rest = set(active[1:])
        key = {v: w[active[0]][v] for v in rest}
        while rest:
            nxt = max(rest, key=lambda v: (key[v], -v))
            a.append(nxt)
            rest.remove(nxt)
            for v in rest:
                key[v] += w[nxt][v]
        s, t = a[-2], a[-1]
        cut_of_phase = key[t] if len(a) > 1 else ZERO
        if best_w is None or cut_of_phase < best_w:
            best_w = cut_of_phase
            best_side = frozenset(merged[t])
        # contract t into s
        for v in active:
            if v != s and v != t:
                w[s][v] += w[t][v]
                w[v][s] = w[s][v]
        merged[s] |= merged[t]
        active.remove(t)
    return best_w, best_side


def min_st_cut(n: int, weighted_edges, s: int, t: int) -> tuple[Q, frozenset[int]]:
    """Minimum s-t cut (Edmonds-Karp) on an undirected weighted graph.

    Returns (cut weight, source side).
    """
    # residual capacities; undirected edge -> both directions
    cap: list[dict[int, Q]] = [dict() for _ in range(n)]
    for (u, v, wt) in weighted_edges:
        cap[u][v] = cap[u].get(v, ZERO) + wt
        cap[v][u] = cap[v].get(u, ZERO) + wt
    flow_value = ZERO
    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] == -1:
            v = queue.popleft()
            for (u, c) in cap[v].items():
                if c > 0 and parent[u] == -1:
                    parent[u] = v
                    queue.append(u)
        if parent[t] == -1:
            break
        # bottleneck along the path
        bottleneck = None
        v = t
        while v != s:
            p = parent[v]
            c = cap[p][v]
            if bottleneck is None or c < bottleneck:
                bottleneck = c
            v = p
        v = t
        while v != s:
            p = parent[v]
            cap[p][v] -= bottleneck
            cap[v][p] = cap[v].get(p, ZERO) + bottleneck
            v = p
        flow_value += bottleneck
    side = frozenset(v for v in range(n) if parent[v] != -1)
    return flow_value, side
