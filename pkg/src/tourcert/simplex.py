"""Exact rational simplex for LPs of the form

    min  c.x   s.t.  A x >= b,   0 <= x <= u   (u may be +inf)

Bounded-variable tableau simplex with Bland's rule (deterministic,
anti-cycling).  All arithmetic is gmpy2.mpq: no tolerances anywhere.

The caller must supply a feasible starting basis.  Both LPs in this
package admit a trivial one (all structural variables at their upper
bound with slack basis, or slack/t mixed), so no phase-1 is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import Q, ZERO, ONE


class SimplexError(Exception):
    pass


class InfeasibleStart(SimplexError):
    pass


class PivotLimit(SimplexError):
    pass


@dataclass
class LpResult:
    value: Q
    x: list  # structural variable values
    basis: list  # basic variable index per row (structural < m, slack m+i)


def solve_min(
    c,
    rows,
    rhs,
    upper,
    basis,
    at_upper,
    max_pivots: int = 100000,
) -> LpResult:
    """Run bounded simplex to optimality.

    c: structural costs (len m).  rows: list of sparse {var: coeff}
    meaning sum coeff*x >= rhs[i].  upper: per-structural upper bound
    (Q or None for +inf).  basis: starting basic variable per row
    (structural index, or m+i for row i's slack).  at_upper: set of
    structural variables starting nonbasic at their upper bound; all
    other nonbasic variables start at 0.
    """
    m = len(c)
    r = len(rows)
    nvars = m + r  # structural + slacks
    RHS = nvars  # rhs column index

    # Full tableau rows over [structural | slacks | rhs].
    tab = []
    for i, row in enumerate(rows):
        line = [ZERO] * (nvars + 1)
        for (j, a) in row.items():
            line[j] = Q(a)
        line[m + i] = -ONE
        line[RHS] = Q(rhs[i])
        tab.append(line)

    cost = [Q(cj) for cj in c] + [ZERO] * r + [ZERO]

    up = [None if u is None else Q(u) for u in upper] + [None] * r
    lo_all = ZERO

    basis = list(basis)
    is_basic = [False] * nvars
    for bi in basis:
        is_basic[bi] = True
    at_up = set(at_upper)
    for j in at_up:
        if is_basic[j]:
            raise SimplexError("variable cannot be both basic and at upper")
        if up[j] is None:
            raise SimplexError("at_upper variable lacks an upper bound")

    _canonicalize(tab, cost, basis)

    def compute_xb():
        vals = []
        for i in range(r):
            v = tab[i][RHS]
            for j in at_up:
                a = tab[i][j]
                if a:
                    v -= a * up[j]
            vals.append(v)
        return vals

    xb = compute_xb()
    for i in range(r):
        bi = basis[i]
        if xb[i] < lo_all or (up[bi] is not None and xb[i] > up[bi]):
            raise InfeasibleStart(
                f"starting basis infeasible at row {i}: value {xb[i]}"
            )

    for _ in range(max_pivots):
        # Bland entering: smallest-index nonbasic variable with a
        # profitable reduced cost.
        enter = -1
        direction = 0
        for j in range(nvars):
            if is_basic[j]:
                continue
            rc = cost[j]
            if j in at_up:
                if rc > 0:
                    enter = j
                    direction = -1
                    break
            else:
                if rc < 0:
                    enter = j
                    direction = 1
                    break
        if enter == -1:
            break  # optimal

        # Ratio test.  Entering moves by t*direction from its bound.
        col = [tab[i][enter] for i in range(r)]
        limit = None  # (t, blocking var index, row or -1 for bound flip)
        if up[enter] is not None:
            limit = (up[enter], enter, -1)
        for i in range(r):
            d = direction * col[i]
            bi = basis[i]
            if d > 0:
                t = (xb[i] - lo_all) / d
            elif d < 0:
                if up[bi] is None:
                    continue
                t = (up[bi] - xb[i]) / (-d)
            else:
                continue
            if limit is None or t < limit[0] or (t == limit[0] and bi < limit[1]):
                limit = (t, bi, i)
        if limit is None:
            raise SimplexError("LP is unbounded")
        t, bvar, row_i = limit

        if row_i == -1:
            # Bound flip: entering jumps to its other bound.
            if enter in at_up:
                at_up.remove(enter)
            else:
                at_up.add(enter)
            xb = compute_xb()
            continue

        # Pivot: entering becomes basic in row_i; leaving goes to the
        # bound it ran into.
        leaving = basis[row_i]
        d = direction * col[row_i]
        leaves_to_upper = d < 0
        _pivot(tab, cost, row_i, enter)
        basis[row_i] = enter
        is_basic[enter] = True
        is_basic[leaving] = False
        if enter in at_up:
            at_up.remove(enter)
        if leaves_to_upper:
            at_up.add(leaving)
        xb = compute_xb()
    else:
        raise PivotLimit(f"no optimum within {max_pivots} pivots")

    x = [ZERO] * m
    for j in at_up:
        if j < m:
            x[j] = up[j]
    for i in range(r):
        if basis[i] < m:
            x[basis[i]] = xb[i]
    value = sum((Q(cj) * xj for cj, xj in zip(c, x)), ZERO)
    return LpResult(value=value, x=x, basis=basis)


def _canonicalize(tab, cost, basis):
    """Gauss-Jordan the tableau so basis columns form the identity and
    drop out of the cost row."""
    r = len(tab)
    done = [False] * r
    remaining = list(range(r))
    while remaining:
        progressed = False
        for i in list(remaining):
            if tab[i][basis[i]]:
                _pivot(tab, cost, i, basis[i])
                remaining.remove(i)
                progressed = True
        if not progressed:
            raise SimplexError("starting basis is singular")


def _pivot(tab, cost, pr, pc):
    row = tab[pr]
    piv = row[pc]
    if not piv:
        raise SimplexError("zero pivot")
    if piv != ONE:
        inv = ONE / piv
        tab[pr] = row = [v * inv if v else v for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for line in tab:
        if line is row:
            continue
        f = line[pc]
        if f:
            for j in nz:
                line[j] -= f * row[j]
    f = cost[pc]
    if f:
        for j in nz:
            cost[j] -= f * row[j]
