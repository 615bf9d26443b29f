"""Exact rational arithmetic helpers.

All quantities in this package (LP values, circulation values, cost
bounds) are gmpy2.mpq rationals; nothing downstream ever touches a
float except optional human-readable output columns.
"""

from __future__ import annotations

from gmpy2 import mpq

Q = mpq

ZERO = mpq(0)
ONE = mpq(1)
TWO = mpq(2)
HALF = mpq(1, 2)


def qstr(q) -> str:
    """Format a rational as "p/q" in lowest terms ("p" when q == 1)."""
    q = mpq(q)
    return str(q)


def parse_q(s: str):
    """Parse "p/q" or "p" into an exact rational."""
    return mpq(s)
