"""Dense exact matrices over the rings in :mod:`symsig.rings`.

Smith normal form, solving and direct-summand tests run over the Euclidean
rings Z, Q and Q[t,t^-1].  Over fields a plain row-echelon path is used for
speed; it returns the same answers as the SNF path (the tests cross-check).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from symsig.errors import DimensionMismatch, RingMismatch, UnsupportedRing
from symsig.rings import LQ, LZ, QQ, Ring, ring_from_tag


class Matrix:
    """Immutable dense matrix; ``rows`` is a tuple of row tuples."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, rows: Sequence[Sequence], nrows: int | None = None,
                 ncols: int | None = None, *, coerce: bool = True):
        rows = [list(r) for r in rows]
        if nrows is None:
            nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise DimensionMismatch(f"ragged or mis-sized rows for a {nrows}x{ncols} matrix")
        if coerce:
            rows = [[ring(x) for x in r] for r in rows]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def _raw(cls, ring, rows, nrows, ncols):
        return cls(ring, rows, nrows, ncols, coerce=False)

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero()
        return cls._raw(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls._raw(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, ring: Ring, entries: Sequence) -> "Matrix":
        n = len(entries)
        z = ring.zero()
        return cls._raw(ring, [[ring(entries[i]) if i == j else z for j in range(n)]
                               for i in range(n)], n, n)

    @classmethod
    def column(cls, ring: Ring, entries: Sequence) -> "Matrix":
        return cls(ring, [[x] for x in entries], len(entries), 1)

    @classmethod
    def block(cls, ring: Ring, grid: Sequence[Sequence["Matrix | None"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Matrix":
        """Assemble from blocks; ``None`` stands for a zero block."""
        out = []
        for bi, rs in enumerate(row_sizes):
            for i in range(rs):
                row = []
                for bj, cs in enumerate(col_sizes):
                    blk = grid[bi][bj]
                    if blk is None:
                        row.extend([ring.zero()] * cs)
                    else:
                        if blk.shape != (rs, cs):
                            raise DimensionMismatch(
                                f"block ({bi},{bj}) has shape {blk.shape}, expected {(rs, cs)}")
                        row.extend(blk.rows[i])
                out.append(row)
        return cls._raw(ring, out, sum(row_sizes), sum(col_sizes))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "Matrix"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(self.ring, [[a + b for a, b in zip(r, s)]
                                       for r, s in zip(self.rows, other.rows)], *self.shape)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._raw(self.ring, [[a - b for a, b in zip(r, s)]
                                       for r, s in zip(self.rows, other.rows)], *self.shape)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(self.ring, [[-a for a in r] for r in self.rows], *self.shape)

    def scale(self, c) -> "Matrix":
        c = self.ring(c)
        return Matrix._raw(self.ring, [[c * a for a in r] for r in self.rows], *self.shape)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        z = self.ring.zero()
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols:
                acc = z
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix._raw(self.ring, out, self.nrows, other.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring.tag, self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.ring, [list(c) for c in zip(*self.rows)] if self.nrows else
                           [[] for _ in range(self.ncols)], self.ncols, self.nrows)

    def dagger(self) -> "Matrix":
        """Involuted transpose: entry (i, j) is the conjugate of entry (j, i)."""
        conj = self.ring.conj
        if not self.nrows:
            return Matrix._raw(self.ring, [[] for _ in range(self.ncols)], self.ncols, 0)
        return Matrix._raw(self.ring, [[conj(a) for a in c] for c in zip(*self.rows)],
                           self.ncols, self.nrows)

    def map(self, fn, ring: Ring | None = None) -> "Matrix":
        ring = ring or self.ring
        return Matrix._raw(ring, [[fn(a) for a in r] for r in self.rows], *self.shape)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, [[self.rows[i][j] for j in cols] for i in rows],
                           len(rows), len(cols))

    def col_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(self.nrows), range(start, stop))

    def row_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(start, stop), range(self.ncols))

    def hstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.nrows != self.nrows:
                raise DimensionMismatch("hstack needs equal row counts")
        rows = [sum((list(m.rows[i]) for m in mats), []) for i in range(self.nrows)]
        return Matrix._raw(self.ring, rows, self.nrows, sum(m.ncols for m in mats))

    def vstack(self, *others: "Matrix") -> "Matrix":
        mats = (self,) + others
        for m in others:
            self._check(m)
            if m.ncols != self.ncols:
                raise DimensionMismatch("vstack needs equal column counts")
        rows = [r for m in mats for r in m.rows]
        return Matrix._raw(self.ring, rows, len(rows), self.ncols)

    def to_json(self) -> dict:
        enc = self.ring.encode
        return {"ring": self.ring.tag, "rows": self.nrows, "cols": self.ncols,
                "entries": [enc(a) for r in self.rows for a in r]}

    @classmethod
    def from_json(cls, payload: dict) -> "Matrix":
        ring = ring_from_tag(payload["ring"])
        r, c = payload["rows"], payload["cols"]
        entries = [ring.decode(v) for v in payload["entries"]]
        if len(entries) != r * c:
            raise DimensionMismatch("entry count does not match shape")
        return cls._raw(ring, [entries[i * c:(i + 1) * c] for i in range(r)], r, c)

    def __repr__(self):
        body = "; ".join(", ".join(repr(a) for a in r) for r in self.rows)
        return f"Matrix[{self.ring.tag}]({self.nrows}x{self.ncols}: [{body}])"


def involuted_transpose(A: Matrix) -> Matrix:
    return A.dagger()


def direct_sum(*mats: Matrix) -> Matrix:
    ring = mats[0].ring
    grid = [[m if i == j else None for j in range(len(mats))] for i, m in enumerate(mats)]
    return Matrix.block(ring, grid, [m.nrows for m in mats], [m.ncols for m in mats])


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNF:
    U: Matrix
    S: Matrix
    V: Matrix

    @property
    def factors(self) -> list:
        """Nonzero diagonal entries of S (the invariant factors)."""
        n = min(self.S.shape)
        return [self.S[i, i] for i in range(n) if self.S[i, i] != 0]

    def __iter__(self):
        return iter((self.U, self.S, self.V))


def _require_euclidean(ring: Ring):
    if not ring.euclidean:
        raise UnsupportedRing(f"{ring.tag} is not a supported Euclidean ring")


def smith_normal_form(A: Matrix) -> SNF:
    """U, S, V with U @ A @ V == S, U and V invertible, S diagonal with
    d_1 | d_2 | ... and each d_i unit-normalized."""
    ring = A.ring
    _require_euclidean(ring)
    m, n = A.shape
    S = [list(r) for r in A.rows]
    U = [list(r) for r in Matrix.identity(ring, m).rows]
    V = [list(r) for r in Matrix.identity(ring, n).rows]
    size = ring.size

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in S:
            row[dst] = row[dst] - q * row[src]
        for row in V:
            row[dst] = row[dst] - q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = S[i][j]
                    if a != 0:
                        key = (size(a), i, j)
                        if best is None or key < best:
                            best = key
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    q, r = ring.divmod(S[i][t], p)
                    add_row(i, t, q)
                    if r != 0:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    q, r = ring.divmod(S[t][j], p)
                    add_col(j, t, q)
                    if r != 0:
                        dirty = True
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] != 0 and ring.divmod(S[i][j], p)[1] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
            U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if best is None:
            break
        u = ring.normal_unit(S[t][t])
        if u != ring.one():
            S[t] = [u * a for a in S[t]]
            U[t] = [u * a for a in U[t]]
    return SNF(Matrix._raw(ring, U, m, m), Matrix._raw(ring, S, m, n), Matrix._raw(ring, V, n, n))


def invariant_factors(A: Matrix) -> list:
    if A.ring is QQ:
        return [QQ.one()] * rank(A)
    return smith_normal_form(A).factors


# --------------------------------------------------------------------------
# field fast path


def _rref(rows: list[list], ncols: int):
    """In-place reduced row echelon form over Q; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / Fraction(rows[r][c])
        if inv != 1:
            rows[r] = [a * inv for a in rows[r]]
        pr = rows[r]
        nzc = [k for k in range(c, len(pr)) if pr[k] != 0]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    ri = rows[i]
                    for k in nzc:
                        ri[k] = ri[k] - f * pr[k]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(A: Matrix) -> int:
    if A.ring is QQ:
        return len(_rref([list(r) for r in A.rows], A.ncols))
    if A.ring is LZ:
        return rank(A.map(LQ, LQ))
    if not A.ring.euclidean:
        raise UnsupportedRing(f"rank over {A.ring.tag}")
    return len(smith_normal_form(A).factors)


def _solve_field(A: Matrix, B: Matrix):
    m, n = A.shape
    k = B.ncols
    rows = [list(A.rows[i]) + list(B.rows[i]) for i in range(m)]
    pivots = _rref(rows, n)
    for i in range(len(pivots), m):
        if any(rows[i][n + j] != 0 for j in range(k)):
            return None
    X = [[Fraction(0)] * k for _ in range(n)]
    for i, c in enumerate(pivots):
        X[c] = [rows[i][n + j] for j in range(k)]
    return Matrix._raw(QQ, X, n, k)


def solve_linear(A: Matrix, b: Matrix) -> Matrix | None:
    """Some x with A @ x == b, or None when no solution exists over the ring."""
    A._check(b)
    if A.nrows != b.nrows:
        raise DimensionMismatch(f"A has {A.nrows} rows, b has {b.nrows}")
    if A.ring is QQ:
        return _solve_field(A, b)
    _require_euclidean(A.ring)
    ring = A.ring
    U, S, V = smith_normal_form(A)
    c = U @ b
    n = A.ncols
    y = [[ring.zero()] * b.ncols for _ in range(n)]
    diag = min(A.shape)
    for i in range(A.nrows):
        s = S[i, i] if i < diag else ring.zero()
        for j in range(b.ncols):
            v = c[i, j]
            if s == 0:
                if v != 0:
                    return None
                continue
            q, r = ring.divmod(v, s)
            if r != 0:
                return None
            y[i][j] = q
    return V @ Matrix._raw(ring, y, n, b.ncols)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning ker(A); over a PID they form a basis of a direct summand."""
    ring = A.ring
    m, n = A.shape
    if ring is QQ:
        rows = [list(r) for r in A.rows]
        pivots = _rref(rows, n)
        free = [c for c in range(n) if c not in pivots]
        cols = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -rows[i][f]
            cols.append(v)
        return Matrix._raw(ring, [list(r) for r in zip(*cols)] if cols else [[] for _ in range(n)],
                           n, len(cols))
    _require_euclidean(ring)
    U, S, V = smith_normal_form(A)
    r = len([i for i in range(min(m, n)) if S[i, i] != 0])
    return V.col_slice(r, n)


@dataclass(frozen=True)
class SummandWitness:
    """Outcome of :func:`image_is_direct_summand`.

    On success ``projector`` is an idempotent on the codomain with image im(A)
    and ``retraction`` satisfies retraction @ basis == I for ``basis`` a basis
    of im(A).  On failure ``factor`` is the first non-unit invariant factor.
    """
    ok: bool
    basis: Matrix | None = None
    retraction: Matrix | None = None
    projector: Matrix | None = None
    complement: Matrix | None = None
    factor: object = None

    def __bool__(self):
        return self.ok


def image_is_direct_summand(A: Matrix) -> SummandWitness:
    ring = A.ring
    _require_euclidean(ring)
    m, n = A.shape
    U, S, V = smith_normal_form(A)
    factors = [S[i, i] for i in range(min(m, n)) if S[i, i] != 0]
    for f in factors:
        if not ring.is_unit(f):
            return SummandWitness(False, factor=f)
    r = len(factors)
    Uinv = inverse(U)
    basis = Uinv.col_slice(0, r)
    complement = Uinv.col_slice(r, m)
    retraction = U.row_slice(0, r)
    projector = basis @ retraction
    return SummandWitness(True, basis=basis, retraction=retraction, projector=projector,
                          complement=complement)


# --------------------------------------------------------------------------
# determinants and inverses


def det(A: Matrix):
    if A.nrows != A.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    ring = A.ring
    n = A.nrows
    if n == 0:
        return ring.one()
    if ring.euclidean or ring.laurent:
        # Bareiss fraction-free elimination; every division is exact, and over Z[t,t^-1]
        # the quotients (minors of A) are computed in Q[t,t^-1] and are integral
        divmod_ = ring.divmod if ring.euclidean else LQ.divmod
        M = [list(r) for r in A.rows]
        sign = 1
        prev = ring.one()
        for k in range(n - 1):
            if M[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
                if swap is None:
                    return ring.zero()
                M[k], M[swap] = M[swap], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                    q, r = divmod_(num, prev)
                    assert r == 0
                    M[i][j] = ring(q)
            prev = M[k][k]
        return M[n - 1][n - 1] if sign > 0 else -M[n - 1][n - 1]
    if n > 8:
        raise UnsupportedRing(f"determinant of a {n}x{n} matrix over {ring.tag}")
    return _laplace(A.rows, ring)


def _laplace(rows, ring):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j in range(n):
        a = rows[0][j]
        if a == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _laplace(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def is_invertible(A: Matrix) -> bool:
    if A.nrows != A.ncols:
        return False
    if A.ring is QQ:
        return rank(A) == A.nrows
    return A.ring.is_unit(det(A))


def inverse(A: Matrix) -> Matrix:
    ring = A.ring
    n = A.nrows
    if A.ncols != n:
        raise DimensionMismatch("inverse of a non-square matrix")
    if ring is QQ:
        X = _solve_field(A, Matrix.identity(ring, n))
        if X is None or rank(A) != n:
            raise ZeroDivisionError("singular matrix")
        return X
    if ring.euclidean:
        U, S, V = smith_normal_form(A)
        diag = []
        for i in range(n):
            if not ring.is_unit(S[i, i]):
                raise ZeroDivisionError("matrix is not invertible over the ring")
            diag.append(ring.unit_inverse(S[i, i]))
        return V @ Matrix.diagonal(ring, diag) @ U
    d = det(A)
    if not ring.is_unit(d):
        raise ZeroDivisionError("matrix is not invertible over the ring")
    dinv = ring.unit_inverse(d)
    rows = [list(r) for r in A.rows]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]
            c = _laplace(minor, ring) if minor else ring.one()
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return Matrix._raw(ring, [[dinv * a for a in r] for r in adj], n, n)


def left_inverse(A: Matrix) -> Matrix | None:
    """Some L with L @ A == I, or None.  Over Z[t,t^-1] a unit maximal minor
    is searched for instead, which certifies but may miss left inverses."""
    ring = A.ring
    m, k = A.shape
    if k == 0:
        return Matrix.zeros(ring, 0, m)
    if m < k:
        return None
    if ring.euclidean:
        U, S, V = smith_normal_form(A)
        for i in range(k):
            if not ring.is_unit(S[i, i]):
                return None
        Dinv = Matrix.block(ring, [[Matrix.diagonal(ring, [ring.unit_inverse(S[i, i]) for i in range(k)]),
                                    None]], [k], [k, m - k])
        return V @ Dinv @ U
    L = _left_inverse_by_unit_pivots(A)
    if L is not None:
        return L
    if m > 10:
        raise UnsupportedRing(f"left inverse search over {ring.tag} for {m} rows")
    for rows in combinations(range(m), k):
        sub = A.submatrix(rows, range(k))
        try:
            if not ring.is_unit(det(sub)):
                continue
        except UnsupportedRing:
            continue
        inv = inverse(sub)
        out = [[ring.zero()] * m for _ in range(k)]
        for c, r in enumerate(rows):
            for i in range(k):
                out[i][r] = inv[i, c]
        return Matrix._raw(ring, out, k, m)
    return None


def _left_inverse_by_unit_pivots(A: Matrix) -> Matrix | None:
    """Row and column operations with unit pivots bringing A to [I; 0], so that
    R A C = [I; 0] and L = C [I 0] R; None if some step finds no unit pivot."""
    ring = A.ring
    m, k = A.shape
    M = [list(r) for r in A.rows]
    R = [list(r) for r in Matrix.identity(ring, m).rows]
    C = [list(r) for r in Matrix.identity(ring, k).rows]
    for p in range(k):
        hit = next(((i, j) for j in range(p, k) for i in range(p, m)
                    if M[i][j] != 0 and ring.is_unit(M[i][j])), None)
        if hit is None:
            return None
        i, j = hit
        M[p], M[i] = M[i], M[p]
        R[p], R[i] = R[i], R[p]
        for row in M:
            row[p], row[j] = row[j], row[p]
        for row in C:
            row[p], row[j] = row[j], row[p]
        u = ring.unit_inverse(M[p][p])
        M[p] = [u * x for x in M[p]]
        R[p] = [u * x for x in R[p]]
        for r in range(m):
            c = M[r][p]
            if r != p and c != 0:
                M[r] = [x - c * y for x, y in zip(M[r], M[p])]
                R[r] = [x - c * y for x, y in zip(R[r], R[p])]
        for c_ in range(k):
            c = M[p][c_]
            if c_ != p and c != 0:
                for row in M:
                    row[c_] = row[c_] - row[p] * c
                for row in C:
                    row[c_] = row[c_] - row[p] * c
    Cm = Matrix._raw(ring, C, k, k)
    top = Matrix._raw(ring, R[:k], k, m)
    return Cm @ top


def right_inverse(A: Matrix) -> Matrix | None:
    L = left_inverse(A.T)
    return None if L is None else L.T
