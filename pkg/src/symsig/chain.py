"""Bounded free chain complexes, chain maps, homotopies, cones, duals, homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from symsig.errors import (DimensionMismatch, NotAChainComplex, NotAChainMap, RingMismatch,
                           UnsupportedRing)
from symsig.linalg import Matrix, invariant_factors, rank, solve_linear
from symsig.rings import LQ, LZ, QQ, Ring, RingMap, ring_from_tag


class ChainComplex:
    """Free complex C_0 <- C_1 <- ... <- C_top with C_i = R^{ranks[i]}.

    ``diffs[i]`` (1 <= i <= top) is the matrix of c_i: C_i -> C_{i-1}.
    Degrees outside [0, top] are zero modules.
    """

    __slots__ = ("ring", "ranks", "diffs")

    def __init__(self, ring: Ring, ranks: Sequence[int], diffs: dict | Sequence | None = None,
                 check: bool = True):
        ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in ranks):
            raise DimensionMismatch("negative rank")
        if isinstance(diffs, dict):
            given = dict(diffs)
        else:
            given = {i + 1: d for i, d in enumerate(diffs or [])}
        out = {}
        for i in range(1, len(ranks)):
            d = given.pop(i, None)
            shape = (ranks[i - 1], ranks[i])
            if d is None:
                d = Matrix.zeros(ring, *shape)
            if d.ring != ring:
                raise RingMismatch(f"differential {i} over {d.ring}, complex over {ring}")
            if d.shape != shape:
                raise DimensionMismatch(f"differential {i} has shape {d.shape}, expected {shape}")
            out[i] = d
        if any(not m.is_zero() and m.nrows * m.ncols for m in given.values()):
            raise DimensionMismatch(f"differentials given outside degrees 1..{len(ranks) - 1}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "diffs", out)
        if check:
            for i in range(2, len(ranks)):
                if not (out[i - 1] @ out[i]).is_zero():
                    raise NotAChainComplex(f"c_{i - 1} c_{i} != 0")

    def __setattr__(self, name, value):
        raise AttributeError("ChainComplex is immutable")

    @classmethod
    def zero(cls, ring: Ring) -> "ChainComplex":
        return cls(ring, [])

    @classmethod
    def concentrated(cls, ring: Ring, degree: int, rank_: int) -> "ChainComplex":
        return cls(ring, [0] * degree + [rank_])

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def rank(self, i: int) -> int:
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def d(self, i: int) -> Matrix:
        if 1 <= i < len(self.ranks):
            return self.diffs[i]
        return Matrix.zeros(self.ring, self.rank(i - 1), self.rank(i))

    def degrees(self) -> range:
        return range(len(self.ranks))

    def total_rank(self) -> int:
        return sum(self.ranks)

    def is_zero(self) -> bool:
        return not any(self.ranks)

    def padded(self, top: int) -> "ChainComplex":
        """Same complex with explicit zero modules up to ``top``."""
        if top < self.top:
            if any(self.ranks[top + 1:]):
                raise DimensionMismatch("cannot truncate nonzero modules")
            ranks = self.ranks[:top + 1]
        else:
            ranks = self.ranks + (0,) * (top - self.top)
        return ChainComplex(self.ring, ranks, {i: self.d(i) for i in range(1, len(ranks))},
                            check=False)

    def trimmed(self) -> "ChainComplex":
        top = max((i for i, r in enumerate(self.ranks) if r), default=-1)
        return self.padded(top) if top >= 0 else ChainComplex.zero(self.ring)

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.ring == b.ring and a.ranks == b.ranks and a.diffs == b.diffs

    def __hash__(self):
        t = self.trimmed()
        return hash((t.ring.tag, t.ranks))

    def __repr__(self):
        return f"ChainComplex[{self.ring.tag}](ranks={list(self.ranks)})"

    def to_json(self) -> dict:
        return {"ring": self.ring.tag, "top": self.top, "ranks": list(self.ranks),
                "differentials": [self.diffs[i].to_json() for i in range(1, len(self.ranks))]}

    @classmethod
    def from_json(cls, payload: dict) -> "ChainComplex":
        ring = ring_from_tag(payload["ring"])
        ranks = payload["ranks"]
        if payload.get("top", len(ranks) - 1) != len(ranks) - 1:
            raise DimensionMismatch("top degree does not match ranks")
        diffs = [Matrix.from_json(m) for m in payload["differentials"]]
        return cls(ring, ranks, diffs)


def direct_sum_complex(*cs: ChainComplex) -> ChainComplex:
    from symsig.linalg import direct_sum
    ring = cs[0].ring
    top = max(c.top for c in cs)
    ranks = [sum(c.rank(i) for c in cs) for i in range(top + 1)]
    diffs = {i: direct_sum(*(c.d(i) for c in cs)) for i in range(1, top + 1)}
    return ChainComplex(ring, ranks, diffs, check=False)


@dataclass(frozen=True)
class ChainMap:
    """Degree-preserving chain map; ``maps[i]`` is target_i x source_i."""
    source: ChainComplex
    target: ChainComplex
    maps: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        ring = self.source.ring
        if self.target.ring != ring:
            raise RingMismatch("chain map between complexes over different rings")
        top = max(self.source.top, self.target.top)
        full = {}
        for i in range(top + 1):
            shape = (self.target.rank(i), self.source.rank(i))
            m = self.maps.get(i)
            if m is None:
                m = Matrix.zeros(ring, *shape)
            if m.shape != shape:
                raise DimensionMismatch(f"chain map degree {i}: shape {m.shape}, expected {shape}")
            full[i] = m
        object.__setattr__(self, "maps", full)
        if self.check:
            bad = self.first_defect()
            if bad is not None:
                raise NotAChainMap(f"chain map square fails in degree {bad}")

    def first_defect(self) -> int | None:
        for i in range(1, max(self.source.top, self.target.top) + 1):
            lhs = self[i - 1] @ self.source.d(i)
            rhs = self.target.d(i) @ self[i]
            if lhs != rhs:
                return i
        return None

    def __getitem__(self, i: int) -> Matrix:
        if i in self.maps:
            return self.maps[i]
        return Matrix.zeros(self.source.ring, self.target.rank(i), self.source.rank(i))

    @property
    def ring(self) -> Ring:
        return self.source.ring

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {i: Matrix.identity(C.ring, C.rank(i)) for i in C.degrees()}, check=False)

    @classmethod
    def zero(cls, S: ChainComplex, T: ChainComplex) -> "ChainMap":
        return cls(S, T, {}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        top = max(other.source.top, self.target.top, self.source.top)
        return ChainMap(other.source, self.target,
                        {i: self[i] @ other[i] for i in range(top + 1)}, check=False)

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise DimensionMismatch("chain maps with different ends")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {i: self[i] + other[i] for i in self.maps},
                        check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {i: self[i] - other[i] for i in self.maps},
                        check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: -m for i, m in self.maps.items()},
                        check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        top = max(self.source.top, self.target.top, other.source.top, other.target.top)
        return (self.source == other.source and self.target == other.target
                and all(self[i] == other[i] for i in range(top + 1)))

    __hash__ = None

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "maps": [self[i].to_json() for i in range(max(self.source.top, self.target.top) + 1)]}

    @classmethod
    def from_json(cls, payload: dict) -> "ChainMap":
        S = ChainComplex.from_json(payload["source"])
        T = ChainComplex.from_json(payload["target"])
        return cls(S, T, {i: Matrix.from_json(m) for i, m in enumerate(payload["maps"])})


@dataclass(frozen=True)
class ChainHomotopy:
    """h with f - g = d h + h d; ``h[i]`` maps source_i -> target_{i+1}."""
    f: ChainMap
    g: ChainMap
    h: dict
    check: bool = True

    def __post_init__(self):
        if self.check:
            bad = homotopy_defect(self.f - self.g, self.h)
            if bad is not None:
                raise NotAChainMap(f"homotopy identity fails in degree {bad}")


def _h(h: dict, f: ChainMap, i: int) -> Matrix:
    m = h.get(i)
    if m is None:
        return Matrix.zeros(f.ring, f.target.rank(i + 1), f.source.rank(i))
    return m


def homotopy_defect(diff: ChainMap, h: dict) -> int | None:
    """First degree where diff != d h + h d, or None."""
    S, T = diff.source, diff.target
    for i in range(max(S.top, T.top) + 1):
        rhs = T.d(i + 1) @ _h(h, diff, i) + _h(h, diff, i - 1) @ S.d(i)
        if diff[i] != rhs:
            return i
    return None


# --------------------------------------------------------------------------
# constructions


def dual_complex(C: ChainComplex, n: int, signed: bool = False) -> ChainComplex:
    """C^{n-*}: degree i is (C_{n-i})^*, differential c_{n-i+1}^* (involuted transpose).

    With ``signed`` the differential in degree i carries the extra sign (-1)^i,
    which is the sign for which a symmetric structure's phi_0 is a chain map.
    """
    if C.trimmed().top > n:
        raise DimensionMismatch(f"complex of top degree {C.top} has no {n}-dual in degrees >= 0")
    ranks = [C.rank(n - i) for i in range(n + 1)]
    diffs = {}
    for i in range(1, n + 1):
        m = C.d(n - i + 1).dagger()
        diffs[i] = -m if (signed and i % 2) else m
    return ChainComplex(C.ring, ranks, diffs, check=False)


def mapping_cone(f: ChainMap) -> ChainComplex:
    """cone(f)_i = target_i + source_{i-1}, d = [[d_T, (-1)^{i-1} f], [0, d_S]]."""
    S, T = f.source, f.target
    ring = f.ring
    top = max(T.top, S.top + 1)
    ranks = [T.rank(i) + S.rank(i - 1) for i in range(top + 1)]
    diffs = {}
    for i in range(1, top + 1):
        sign = 1 if (i - 1) % 2 == 0 else -1
        fi = f[i - 1] if sign > 0 else -f[i - 1]
        diffs[i] = Matrix.block(ring, [[T.d(i), fi], [None, S.d(i - 1)]],
                                [T.rank(i - 1), S.rank(i - 2)], [T.rank(i), S.rank(i - 1)])
    return ChainComplex(ring, ranks, diffs, check=False)


def suspend(C: ChainComplex, k: int = 1) -> ChainComplex:
    """Shift degrees up by k (no sign change on differentials)."""
    ranks = [0] * k + list(C.ranks)
    return ChainComplex(C.ring, ranks, {i + k: C.d(i) for i in range(1, C.top + 1)}, check=False)


def induce(C: ChainComplex, beta: RingMap) -> ChainComplex:
    if C.ring != beta.source:
        raise RingMismatch(f"complex over {C.ring}, ring map from {beta.source}")
    return ChainComplex(beta.target, C.ranks,
                        {i: C.d(i).map(beta, beta.target) for i in range(1, C.top + 1)})


def induce_map(f: ChainMap, beta: RingMap) -> ChainMap:
    return ChainMap(induce(f.source, beta), induce(f.target, beta),
                    {i: m.map(beta, beta.target) for i, m in f.maps.items()}, check=False)


# --------------------------------------------------------------------------
# homology and equivalences


def reduce_by_units(C: ChainComplex) -> ChainComplex:
    """Cancel unit entries of differentials (Gaussian elimination of complexes).

    The result is chain homotopy equivalent to C and has no unit entries in
    any differential.  Over a field the result has zero differentials.
    """
    ring = C.ring
    ranks = list(C.ranks)
    d = {i: [list(r) for r in C.d(i).rows] for i in range(1, C.top + 1)}

    def find():
        for i in sorted(d):
            for a, row in enumerate(d[i]):
                for b, x in enumerate(row):
                    if x != 0 and ring.is_unit(x):
                        return i, a, b
        return None

    while True:
        hit = find()
        if hit is None:
            break
        i, a, b = hit
        M = d[i]
        uinv = ring.unit_inverse(M[a][b])
        col_b = [M[r][b] for r in range(len(M))]
        row_a = M[a]
        new = []
        for r in range(len(M)):
            if r == a:
                continue
            f = col_b[r] * uinv
            if f != 0:
                new.append([M[r][c] - f * row_a[c] for c in range(len(row_a)) if c != b])
            else:
                new.append([M[r][c] for c in range(len(row_a)) if c != b])
        d[i] = new
        if i + 1 in d:
            d[i + 1] = [row for r, row in enumerate(d[i + 1]) if r != b]
        if i - 1 in d:
            d[i - 1] = [[x for c, x in enumerate(row) if c != a] for row in d[i - 1]]
        ranks[i] -= 1
        ranks[i - 1] -= 1
    diffs = {i: Matrix._raw(ring, d[i], ranks[i - 1], ranks[i]) for i in d}
    return ChainComplex(ring, ranks, diffs, check=False)


@dataclass(frozen=True)
class Homology:
    free_rank: int
    torsion: tuple = ()

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def homology(C: ChainComplex, i: int) -> Homology:
    ring = C.ring
    if not ring.euclidean:
        raise UnsupportedRing(f"homology over {ring.tag}")
    R = reduce_by_units(C)
    n_i = R.rank(i)
    rk_out = rank(R.d(i)) if R.d(i).nrows * R.d(i).ncols else 0
    inc = R.d(i + 1)
    if ring is QQ:
        factors = [1] * rank(inc) if inc.nrows * inc.ncols else []
    else:
        factors = invariant_factors(inc) if inc.nrows * inc.ncols else []
    torsion = tuple(f for f in factors if not ring.is_unit(f))
    return Homology(n_i - rk_out - len(factors), torsion)


def betti(C: ChainComplex) -> list[int]:
    return [homology(C, i).free_rank for i in C.degrees()]


def is_acyclic(C: ChainComplex) -> bool:
    R = reduce_by_units(C)
    if R.is_zero():
        return True
    if all(R.d(i).is_zero() for i in range(1, R.top + 1)):
        return False
    ring = C.ring
    if ring.euclidean:
        return all(homology(R, i).is_zero() for i in R.degrees())
    if ring is LZ:
        lifted = induce(R, RingMap.inclusion(LZ, LQ))
        if not is_acyclic(lifted):
            return False
    raise UnsupportedRing(f"cannot decide acyclicity over {ring.tag} for this complex")


def is_equivalence(f: ChainMap) -> bool:
    """True iff cone(f) is acyclic, i.e. f is a chain homotopy equivalence."""
    return is_acyclic(mapping_cone(f))


def _kron(A: Matrix, B: Matrix) -> list[list]:
    rows = []
    for ar in A.rows:
        for br in B.rows:
            rows.append([a * b for a in ar for b in br])
    return rows


def find_null_homotopy(f: ChainMap) -> dict | None:
    """Solve f = d h + h d degreewise; returns {i: h_i} or None."""
    S, T = f.source, f.target
    ring = f.ring
    if not ring.euclidean:
        raise UnsupportedRing(f"homotopy search over {ring.tag}")
    top = max(S.top, T.top)
    # unknowns h_i : S_i -> T_{i+1}, flattened row-major
    offsets, n_unknowns = {}, 0
    for i in range(top + 1):
        offsets[i] = n_unknowns
        n_unknowns += T.rank(i + 1) * S.rank(i)
    rows, rhs = [], []
    zero = ring.zero()
    for i in range(top + 1):
        ti, si = T.rank(i), S.rank(i)
        if ti * si == 0:
            continue
        block_rows = [[zero] * n_unknowns for _ in range(ti * si)]
        # d^T_{i+1} h_i : vec(A X) = (A kron I) vec(X)
        if T.rank(i + 1):
            A = T.d(i + 1)
            for r, row in enumerate(_kron(A, Matrix.identity(ring, si))):
                off = offsets[i]
                for c, x in enumerate(row):
                    if x != 0:
                        block_rows[r][off + c] = block_rows[r][off + c] + x
        # h_{i-1} d^S_i : vec(X B) = (I kron B^T) vec(X)
        if i >= 1 and S.rank(i) and T.rank(i):
            B = S.d(i)
            for r, row in enumerate(_kron(Matrix.identity(ring, ti), B.T)):
                off = offsets[i - 1]
                for c, x in enumerate(row):
                    if x != 0:
                        block_rows[r][off + c] = block_rows[r][off + c] + x
        rows.extend(block_rows)
        rhs.extend([[x] for r in f[i].rows for x in r])
    if n_unknowns == 0:
        return {} if all(f[i].is_zero() for i in range(top + 1)) else None
    if not rows:
        return {i: Matrix.zeros(ring, T.rank(i + 1), S.rank(i)) for i in range(top + 1)}
    A = Matrix._raw(ring, rows, len(rows), n_unknowns)
    b = Matrix._raw(ring, rhs, len(rhs), 1)
    x = solve_linear(A, b)
    if x is None:
        return None
    out = {}
    for i in range(top + 1):
        r, c = T.rank(i + 1), S.rank(i)
        flat = [x[offsets[i] + k, 0] for k in range(r * c)]
        out[i] = Matrix._raw(ring, [flat[j * c:(j + 1) * c] for j in range(r)], r, c)
    return out


def homotopic(f: ChainMap, g: ChainMap) -> dict | None:
    return find_null_homotopy(f - g)
