"""Independent oracles used by the tests.

Nothing here imports the symsig algorithms under test; matrices are read as plain
nested lists of ring elements and all arithmetic is done directly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations


def rows_of(M) -> list[list]:
    return [list(r) for r in M.rows]


def det(rows: list[list]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    sign, out = 1, Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            q = a[r][c] / a[c][c]
            if q:
                a[r] = [x - q * y for x, y in zip(a[r], a[c])]
    return sign * out


def rank_q(rows: list[list]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rk, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        p = next((r for r in range(rk, len(a)) if a[r][c] != 0), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        for r in range(len(a)):
            if r != rk and a[r][c]:
                q = a[r][c] / a[rk][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[rk])]
        rk += 1
    return rk


def unit_invariant_factors_z(rows: list[list]) -> bool:
    """Nonzero invariant factors of an integer matrix are all +-1 iff the gcd of the
    maximal nonvanishing minors (determinantal divisor of order rank) is 1."""
    if not rows or not rows[0]:
        return True
    r = rank_q(rows)
    if r == 0:
        return True
    g = 0
    for I in combinations(range(len(rows)), r):
        for J in combinations(range(len(rows[0])), r):
            g = math.gcd(g, int(det([[rows[i][j] for j in J] for i in I])))
            if g == 1:
                return True
    return False


def matmul(A: list[list], B: list[list], zero) -> list[list]:
    n = len(B)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), zero) for j in range(len(B[0]))]
            for i in range(len(A))] if B else [[zero] * 0 for _ in A]


def column_nonzero(rows: list[list], c: int, zero) -> bool:
    return any(r[c] != zero for r in rows)


def row_nonzero(rows: list[list], r: int, zero) -> bool:
    return bool(rows) and any(x != zero for x in rows[r])


# --------------------------------------------------------------------------
# corruption oracle


def predict_differential(d: dict, i: int, a: int, b: int, zero):
    """Adding 1 to entry (a, b) of c_i: first degree j with c_{j-1} c_j != 0, or None.

    c_{i-1}(c_i + E) = c_{i-1} E is nonzero iff column a of c_{i-1} is; (c_i + E) c_{i+1}
    = E c_{i+1} is nonzero iff row b of c_{i+1} is.
    """
    if i - 1 in d and column_nonzero(d[i - 1], a, zero):
        return i
    if i + 1 in d and row_nonzero(d[i + 1], b, zero):
        return i + 1
    return None


def predict_chain_map(d_src: dict, d_tgt: dict, i: int, a: int, b: int, zero):
    """Adding 1 to entry (a, b) of f_i: first degree j with f_{j-1} c_j != c'_j f_j."""
    if i in d_tgt and column_nonzero(d_tgt[i], a, zero):
        return i
    if i + 1 in d_src and row_nonzero(d_src[i + 1], b, zero):
        return i + 1
    return None


def predict_structure(d: dict, k: int, s0: int, r0: int, a: int, b: int, zero, top: int):
    """Components (s, r) in which the boundary of the single-entry chain E = e_{ab} at
    (s0, r0) of a degree-k symmetric chain is nonzero; the smallest (r, s) is returned.

    With q = k - r0 + s0 the terms are:
      d E          at (s0, r0 - 1), nonzero iff column a of c_{r0} is nonzero;
      E d^*        at (s0, r0),     nonzero iff column b of c_q is nonzero;
      E and T E    at (s0 + 1, r0) and (s0 + 1, q), where T E = +-(E)^* sits in degree q;
                   when q = r0 they share a matrix and cancel iff a = b and
                   s0 + 1 + r0 is odd.
    """
    q = k - r0 + s0
    hits = set()
    if r0 - 1 >= 0 and r0 in d and column_nonzero(d[r0], a, zero):
        hits.add((r0 - 1, s0))
    if q in d and column_nonzero(d[q], b, zero):
        hits.add((r0, s0))
    if q != r0:
        hits.add((r0, s0 + 1))
        if 0 <= q <= top:
            hits.add((q, s0 + 1))
    elif not (a == b and (s0 + 1 + r0) % 2 == 1):
        hits.add((r0, s0 + 1))
    return min(hits) if hits else None
