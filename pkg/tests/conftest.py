"""Shared fixtures: named small graphs and the big random corpus used
by the acceptance suite."""

import pytest

from tourcert.graph import (
    Graph,
    generate_random_subquartic,
    subdivide_edges,
)


def cycle(n: int) -> Graph:
    return Graph.from_edges(
        n, [tuple(sorted((i, (i + 1) % n))) for i in range(n)]
    )


def complete(n: int) -> Graph:
    return Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def bowtie() -> Graph:
    # two triangles sharing vertex 2
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def circulant(n: int, steps) -> Graph:
    edges = set()
    for i in range(n):
        for s in steps:
            edges.add(tuple(sorted((i, (i + s) % n))))
    return Graph.from_edges(n, sorted(edges))


def corpus_instances(limit=None):
    """Mixed corpus: plain/sparse generator output plus subdivided
    4-regular graphs (the family that actually produces expensive
    vertices and fix-ups).  Deterministic."""
    out = []
    for seed in range(520):
        n = 10 + 2 * (seed % 26)  # 10..60
        sparsity = [0.0, 0.15, 0.3][seed % 3]
        try:
            g = generate_random_subquartic(n, seed, sparsity=sparsity)
        except Exception:
            continue
        out.append((f"gen-{seed}", g))
    for seed in range(360):
        base_n = 10 + 2 * (seed % 6)  # subdivided n: 3*base for frac 1.0
        frac = [1.0, 0.5, 0.75][seed % 3]
        try:
            base = generate_random_subquartic(base_n, 10_000 + seed)
        except Exception:
            continue
        g = subdivide_edges(base, frac, seed=seed)
        if g.n <= 60:
            out.append((f"sub-{seed}", g))
    for seed in range(200):
        n = 12 + 2 * (seed % 20)
        try:
            g = generate_random_subquartic(n, 20_000 + seed, sparsity=0.4)
        except Exception:
            continue
        out.append((f"sparse-{seed}", g))
    if limit:
        out = out[:limit]
    return out


@pytest.fixture(scope="session")
def corpus():
    instances = corpus_instances()
    assert len(instances) >= 1000
    return instances


@pytest.fixture(scope="session")
def corpus_certificates(corpus):
    """(certificates, wall seconds to certify the whole corpus)."""
    import time

    from tourcert.certify import certify

    t0 = time.monotonic()
    certs = [(name, certify(g, with_opt_tsp=False)) for name, g in corpus]
    return certs, time.monotonic() - t0
