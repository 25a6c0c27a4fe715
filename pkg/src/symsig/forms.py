"""epsilon-symmetric forms, Lagrangians, formations, signatures, and form <-> complex conversions.

Forms live on a free module P = R^k with Gram matrix mu (mu^* = eps mu). A
Lagrangian is given by the matrix j whose columns span it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from symsig.chain import ChainComplex, ChainMap
from symsig.errors import (DegenerateEvaluation, DimensionMismatch, NeedsHalf, NotAutomorphism,
                           NotFree, NotIsometry, NotLagrangian, SkewNotSigned, StructureMismatch,
                           UnsupportedRing)
from symsig.linalg import (Matrix, direct_sum, inverse, is_invertible, kernel_basis, left_inverse,
                           rank, right_inverse, smith_normal_form, solve_linear)
from symsig.rings import LZ, QQ, ZZ, Ring, RingMap


@dataclass(frozen=True, eq=False)
class EpsForm:
    """A nondegenerate eps-symmetric form: mu^* = eps mu with mu invertible."""
    matrix: Matrix
    eps: int = 1
    check: bool = True

    def __post_init__(self):
        mu = self.matrix
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        if mu.nrows != mu.ncols:
            raise DimensionMismatch("form matrix must be square")
        if self.check:
            if mu.dagger() != mu.scale(self.eps):
                raise StructureMismatch("form matrix is not eps-symmetric")
            if not is_invertible(mu):
                raise StructureMismatch("form matrix is not invertible over the ring")

    @property
    def ring(self) -> Ring:
        return self.matrix.ring

    @property
    def rank(self) -> int:
        return self.matrix.nrows

    def __eq__(self, other):
        if not isinstance(other, EpsForm):
            return NotImplemented
        return self.eps == other.eps and self.matrix == other.matrix

    __hash__ = None

    def __repr__(self):
        return f"EpsForm(eps={self.eps:+d}, {self.matrix!r})"

    def __add__(self, other: "EpsForm") -> "EpsForm":
        if self.eps != other.eps:
            raise StructureMismatch("direct sum of forms with different symmetry")
        return EpsForm(direct_sum(self.matrix, other.matrix), self.eps, check=False)

    def __neg__(self) -> "EpsForm":
        return EpsForm(-self.matrix, self.eps, check=False)

    def pair(self, x: Matrix, y: Matrix) -> Matrix:
        return x.dagger() @ self.matrix @ y

    def map(self, beta: RingMap) -> Matrix:
        return self.matrix.map(beta, beta.target)

    def to_json(self) -> dict:
        return {"eps": self.eps, "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, payload: dict) -> "EpsForm":
        return cls(Matrix.from_json(payload["matrix"]), int(payload["eps"]))


@dataclass(frozen=True, eq=False)
class Lagrangian:
    form: EpsForm
    j: Matrix
    retraction: Matrix | None = None

    @property
    def rank(self) -> int:
        return self.j.ncols

    def same_subspace(self, other: "Lagrangian") -> bool:
        return _contains(self, other.j) and _contains(other, self.j)

    def to_json(self) -> dict:
        return {"j": self.j.to_json()}


@dataclass(frozen=True, eq=False)
class Formation:
    form: EpsForm
    K: Lagrangian
    L: Lagrangian

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "K": self.K.to_json(), "L": self.L.to_json()}

    @classmethod
    def from_json(cls, payload: dict) -> "Formation":
        F = EpsForm.from_json(payload["form"])
        return cls(F, make_lagrangian(F, Matrix.from_json(payload["K"]["j"])),
                   make_lagrangian(F, Matrix.from_json(payload["L"]["j"])))

    def __eq__(self, other):
        if not isinstance(other, Formation):
            return NotImplemented
        return self.form == other.form and self.K.j == other.K.j and self.L.j == other.L.j

    __hash__ = None


def _contains(K: Lagrangian, x: Matrix) -> bool:
    """Columns of x lie in the span of K (uses K's retraction onto a summand)."""
    ret = K.retraction if K.retraction is not None else left_inverse(K.j)
    if ret is None:
        return False
    return K.j @ (ret @ x) == x


# --------------------------------------------------------------------------
# constructors


def hyperbolic(ring: Ring, k: int, eps: int = 1) -> EpsForm:
    I = Matrix.identity(ring, k)
    return EpsForm(Matrix.block(ring, [[None, I], [I.scale(eps), None]], [k, k], [k, k]), eps)


def diagonal_form(ring: Ring, entries, eps: int = 1) -> EpsForm:
    return EpsForm(Matrix.diagonal(ring, [ring(e) for e in entries]), eps)


def coordinate_lagrangian(F: EpsForm, second: bool = False) -> Lagrangian:
    """The first (or second) coordinate half of a hyperbolic form."""
    k = F.rank // 2
    I = Matrix.identity(F.ring, k)
    j = Matrix.block(F.ring, [[None], [I]] if second else [[I], [None]], [k, k], [k])
    return make_lagrangian(F, j)


# --------------------------------------------------------------------------
# Lagrangians


@dataclass(frozen=True)
class LagrangianCheck:
    ok: bool
    reason: str = ""
    retraction: Matrix | None = None

    def __bool__(self):
        return self.ok


def is_lagrangian(F: EpsForm, j: Matrix) -> LagrangianCheck:
    """Summand, isotropy, half rank, and exactness of 0 -> L -> P -> L^* -> 0."""
    if j.ring != F.ring or j.nrows != F.rank:
        return LagrangianCheck(False, "shape or ring mismatch")
    if 2 * j.ncols != F.rank:
        return LagrangianCheck(False, f"rank {j.ncols} is not half of {F.rank}")
    ret = left_inverse(j)
    if ret is None:
        return LagrangianCheck(False, "not a direct summand (no left inverse)")
    if not F.pair(j, j).is_zero():
        return LagrangianCheck(False, "not isotropic")
    jm = j.dagger() @ F.matrix
    if right_inverse(jm) is None:
        return LagrangianCheck(False, "j^* mu is not surjective")
    if F.ring.euclidean:
        K = kernel_basis(jm)
        if K.ncols and solve_linear(j, K) is None:
            return LagrangianCheck(False, "kernel of j^* mu is larger than L")
    # over Z[t,t^-1]: ker(j^* mu) is a rank-k summand containing the rank-k summand im(j),
    # so the two coincide once the checks above pass
    return LagrangianCheck(True, "", ret)


def make_lagrangian(F: EpsForm, j: Matrix) -> Lagrangian:
    chk = is_lagrangian(F, j)
    if not chk:
        raise NotLagrangian(chk.reason)
    return Lagrangian(F, j, chk.retraction)


def lagrangian_to_iso(F: EpsForm, L: Lagrangian) -> Matrix:
    """A = [j, c] with A^* mu A = hyperbolic; needs 1/2 in the ring."""
    if not F.ring.has_half:
        raise NeedsHalf(f"2 is not a unit in {F.ring.tag}")
    j, mu, eps = L.j, F.matrix, F.eps
    k = j.ncols
    jm = j.dagger() @ mu
    c0 = right_inverse(jm)
    if c0 is None:
        raise NotLagrangian("j^* mu has no right inverse")
    S = c0.dagger() @ mu @ c0
    half = F.ring(Fraction(1, 2)) if F.ring is QQ else F.ring(Fraction(1, 2))
    c = c0 - (j @ S).scale(half * eps)
    A = j.hstack(c)
    H = hyperbolic(F.ring, k, eps).matrix
    if A.dagger() @ mu @ A != H:
        raise StructureMismatch("internal error: complement does not hyperbolize the form")
    return A


def transport_lagrangian(iso: Matrix, F1: EpsForm, F2: EpsForm, K: Lagrangian) -> Lagrangian:
    """Image of K under an isometry iso: F1 -> F2 (iso^* mu2 iso = mu1)."""
    if iso.dagger() @ F2.matrix @ iso != F1.matrix or not is_invertible(iso):
        raise NotIsometry("matrix is not an isometry between the forms")
    return make_lagrangian(F2, iso @ K.j)


def formation_from_automorphism(F: EpsForm, K: Lagrangian, A: Matrix) -> Formation:
    if A.shape != (F.rank, F.rank) or A.dagger() @ F.matrix @ A != F.matrix or not is_invertible(A):
        raise NotAutomorphism("matrix does not preserve the form")
    return Formation(F, K, make_lagrangian(F, A @ K.j))


# --------------------------------------------------------------------------
# signatures


def _to_rationals(A: Matrix) -> Matrix:
    if A.ring is QQ:
        return A
    if A.ring is ZZ:
        return A.map(RingMap.inclusion(ZZ, QQ), QQ)
    raise UnsupportedRing(f"signature needs a form over Z or Q, got {A.ring.tag}")


def congruence_diagonal(A: Matrix) -> tuple[list[Fraction], Matrix]:
    """Diagonal d and invertible P over Q with P^T A P = diag(d) for symmetric A."""
    A = _to_rationals(A)
    n = A.nrows
    M = [list(r) for r in A.rows]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):  # column dst += c * column src, and the matching row op
        for r in range(n):
            M[r][dst] += c * M[r][src]
        for r in range(n):
            M[dst][r] += c * M[src][r]
        for r in range(n):
            P[r][dst] += c * P[r][src]

    def swap(i, j):
        for r in range(n):
            M[r][i], M[r][j] = M[r][j], M[r][i]
        M[i], M[j] = M[j], M[i]
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]

    for k in range(n):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][i] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                other = next((i for i in range(k + 1, n) if M[k][i] != 0), None)
                if other is None:
                    continue
                col_op(k, other, Fraction(1))
        if M[k][k] == 0:
            continue
        for i in range(k + 1, n):
            if M[k][i] != 0:
                col_op(i, k, -M[k][i] / M[k][k])
    return [M[i][i] for i in range(n)], Matrix._raw(QQ, P, n, n)


def inertia(A: Matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric matrix over Z or Q."""
    if A.dagger() != A:
        raise StructureMismatch("inertia of a non-symmetric matrix")
    d, _ = congruence_diagonal(A)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0))


def signature(F: EpsForm) -> int:
    if F.eps != 1:
        raise SkewNotSigned("signature is defined for symmetric forms only")
    p, m, _ = inertia(F.matrix)
    return p - m


def evaluation_signature(F: EpsForm, omega: int) -> int:
    """Signature after t -> omega (forms over Z or Q are taken as they are)."""
    if F.eps != 1:
        raise SkewNotSigned("signature is defined for symmetric forms only")
    A = F.matrix
    if A.ring.laurent:
        beta = RingMap.evaluation(A.ring, omega)
        A = A.map(beta, beta.target)
    A = _to_rationals(A)
    p, m, z = inertia(A)
    if z:
        raise DegenerateEvaluation(f"form becomes degenerate at t = {omega}")
    return p - m


# --------------------------------------------------------------------------
# Lagrangian search over Q


@dataclass(frozen=True)
class LagrangianSearch:
    """status: 'found' (with lagrangian), 'none' (with reason), or 'inconclusive' (with bound)."""
    status: str
    lagrangian: Lagrangian | None = None
    reason: str = ""
    bound: int | None = None

    def __bool__(self):
        return self.status == "found"


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    x = Fraction(x)
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _vec(entries) -> Matrix:
    return Matrix.column(QQ, [Fraction(e) for e in entries])


def _split_hyperbolic(mu: Matrix, basis: Matrix, x: Matrix):
    """Given isotropic x in span(basis), return (x, y) spanning a hyperbolic plane and
    a basis of its orthogonal complement inside span(basis)."""
    # y in span(basis) with x^T mu y = 1
    row = x.T @ mu @ basis
    idx = next(i for i in range(row.ncols) if row[0, i] != 0)
    y = basis.col_slice(idx, idx + 1).scale(1 / row[0, idx])
    H = x.hstack(y)
    G = H.T @ mu @ H
    Ginv = inverse(G)
    proj = []
    for i in range(basis.ncols):
        b = basis.col_slice(i, i + 1)
        b = b - H @ (Ginv @ (H.T @ mu @ b))
        proj.append(b)
    M = proj[0].hstack(*proj[1:]) if proj else Matrix.zeros(QQ, mu.nrows, 0)
    # extract an independent set of columns
    cols, cur = [], Matrix.zeros(QQ, mu.nrows, 0)
    for i in range(M.ncols):
        c = M.col_slice(i, i + 1)
        trial = cur.hstack(c)
        if rank(trial) > cur.ncols:
            cur = trial
            cols.append(c)
    return x, cur


def _isotropic_in(mu: Matrix, basis: Matrix, bound: int) -> Matrix | None:
    """An isotropic vector in span(basis) of coefficient height <= bound, via diagonalization."""
    G = basis.T @ mu @ basis
    d, P = congruence_diagonal(G)
    k = len(d)
    # pairing heuristic: d_i x^2 + d_j y^2 = 0 with -d_i/d_j a square
    for i in range(k):
        for j in range(i + 1, k):
            if d[i] * d[j] < 0:
                lam = _rational_sqrt(-d[i] / d[j])
                if lam is not None:
                    coeff = [Fraction(0)] * k
                    coeff[i], coeff[j] = Fraction(1), lam
                    return basis @ (P @ _vec(coeff))
    if k < 2:
        return None
    # bounded enumeration on the diagonal form: choose the first k-1 coordinates,
    # solve for the last one when the value is a rational square multiple
    for h in range(1, bound + 1):
        for head in itertools.product(range(-h, h + 1), repeat=k - 1):
            if max(abs(v) for v in head) != h:
                continue
            val = sum(d[i] * head[i] * head[i] for i in range(k - 1))
            last = _rational_sqrt(-val / d[k - 1])
            if last is None:
                continue
            coeff = [Fraction(v) for v in head] + [last]
            if all(c == 0 for c in coeff):
                continue
            return basis @ (P @ _vec(coeff))
    return None


def find_lagrangian(F: EpsForm, bound: int = 50, max_work: int = 200_000) -> LagrangianSearch:
    """Search for a Lagrangian of a form over Q.

    Skew forms always have one (symplectic basis). For symmetric forms a nonzero
    signature is an obstruction; a rank-2 form is decided exactly by whether -det is a
    square; otherwise isotropic vectors are searched up to coefficient height ``bound``.
    """
    if F.ring is not QQ:
        raise UnsupportedRing(f"Lagrangian search is implemented over Q, got {F.ring.tag}")
    n = F.rank
    if n % 2:
        return LagrangianSearch("none", reason="odd rank")
    mu = F.matrix
    if F.eps == 1:
        sig = signature(F)
        if sig != 0:
            return LagrangianSearch("none", reason=f"signature {sig}")
    basis = Matrix.identity(QQ, n)
    found = []
    while basis.ncols:
        if F.eps == -1:
            x = basis.col_slice(0, 1)
        else:
            if basis.ncols == 2:
                G = basis.T @ mu @ basis
                det2 = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
                if _rational_sqrt(-det2) is None:
                    if not found:
                        return LagrangianSearch("none", reason="rank-2 form with -det not a square")
                    # the anisotropic remainder does not rule out other Lagrangians
                    return LagrangianSearch("inconclusive", reason="greedy splitting reached an "
                                            "anisotropic plane", bound=bound)
            hb = bound if basis.ncols <= 4 else min(bound, _height_for_work(basis.ncols, max_work))
            x = _isotropic_in(mu, basis, hb)
            if x is None:
                return LagrangianSearch("inconclusive", reason="no isotropic vector found",
                                        bound=hb)
        x, basis = _split_hyperbolic(mu, basis, x)
        found.append(x)
    j = found[0].hstack(*found[1:]) if found else Matrix.zeros(QQ, n, 0)
    # clear denominators column by column for readability
    j = _primitive_columns(j)
    return LagrangianSearch("found", make_lagrangian(F, j))


def _height_for_work(k: int, max_work: int) -> int:
    h = 1
    while (2 * (h + 1) + 1) ** (k - 1) <= max_work:
        h += 1
    return h


def _primitive_columns(j: Matrix) -> Matrix:
    cols = []
    for c in range(j.ncols):
        col = [j[r, c] for r in range(j.nrows)]
        den = 1
        for x in col:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in col]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        g = g or 1
        cols.append([Fraction(v, g) for v in ints])
    return Matrix._raw(QQ, [list(r) for r in zip(*cols)] if cols else [[] for _ in range(j.nrows)],
                       j.nrows, j.ncols)


# --------------------------------------------------------------------------
# formations


@dataclass(frozen=True)
class Verdict:
    """status: 'trivial', 'nontrivial' or 'inconclusive', with a certificate description."""
    status: str
    certificate: str = ""
    witness: Matrix | None = None

    def to_json(self) -> dict:
        return {"status": self.status, "certificate": self.certificate,
                "witness": None if self.witness is None else self.witness.to_json()}


def is_trivial_formation(phi: Formation) -> Verdict:
    """Partial decision: equal or complementary Lagrangians certify triviality; over a field
    the intersection always splits off, which certifies triviality as well."""
    K, L = phi.K, phi.L
    if K.same_subspace(L):
        return Verdict("trivial", "equal Lagrangians")
    KL = K.j.hstack(L.j)
    if KL.nrows == KL.ncols and is_invertible(KL):
        return Verdict("trivial", "complementary Lagrangians", KL)
    if phi.form.ring is QQ:
        inter = _intersection(K.j, L.j)
        return Verdict("trivial", f"over a field: intersection of rank {inter.ncols} splits off "
                       "as a hyperbolic summand with equal Lagrangians, the rest is complementary",
                       inter)
    return Verdict("inconclusive", "no equality, complement or splitting certificate found")


def _intersection(A: Matrix, B: Matrix) -> Matrix:
    """Basis of span(A) cap span(B) over Q."""
    N = kernel_basis(A.hstack(-B))
    return A @ N.row_slice(0, A.ncols)


# --------------------------------------------------------------------------
# forms and complexes


def complex_from_form(F: EpsForm, m: int):
    """2m-dimensional Poincaré complex concentrated in degree m with phi_0 = mu."""
    from symsig.structures import SymmetricComplex
    if F.eps != (-1) ** m:
        raise StructureMismatch(f"a form in degree {m} must be {(-1) ** m:+d}-symmetric")
    ranks = [0] * (2 * m + 1)
    ranks[m] = F.rank
    C = ChainComplex(F.ring, ranks, {})
    return SymmetricComplex(C, 2 * m, [{m: F.matrix}])


def nullbordism_from_lagrangian(X, m: int, K: Lagrangian, basis: Matrix | None = None):
    """The pair (j: D -> Dbar, (0, psi)) with Dbar_i = D_i (i < m), Dbar_m = K^*.

    D must have zero differentials d_m and d_{m+1}; K lives in D^m (columns are
    cochains), or in the coordinates of ``basis`` when given. j_m is the dual of K's
    inclusion, and the relation holds because K is isotropic.
    """
    from symsig.structures import PoincarePair
    D = X.complex
    n = X.dim
    if n != 2 * m:
        raise DimensionMismatch("nullbordism needs a 2m-dimensional boundary")
    if not (D.d(m).is_zero() and D.d(m + 1).is_zero()):
        raise StructureMismatch("differentials around the middle degree must vanish")
    k = K.j if basis is None else basis @ K.j
    ring = D.ring
    ranks = [D.rank(i) for i in range(m)] + [k.ncols]
    diffs = {i: D.d(i) for i in range(1, m)}
    Dbar = ChainComplex(ring, ranks, diffs, check=False)
    maps = {i: Matrix.identity(ring, D.rank(i)) for i in range(m)}
    maps[m] = k.dagger()
    j = ChainMap(D, Dbar, maps, check=False)
    return PoincarePair(X, Dbar, j, ())


def complex_from_formation(phi: Formation, m: int):
    """(2m+1)-dimensional Poincaré complex: the union of the nullbordisms of K and L."""
    from symsig.structures import glue_pairs
    X = complex_from_form(phi.form, m)
    PK = nullbordism_from_lagrangian(X, m, phi.K)
    PL = nullbordism_from_lagrangian(X, m, phi.L)
    return glue_pairs(PK, PL)


@dataclass(frozen=True)
class MiddleForm:
    """The form on middle cohomology: ``basis`` holds cocycle representatives in C^m."""
    form: EpsForm
    basis: Matrix
    degree: int


def middle_cohomology_basis(C: ChainComplex, m: int) -> Matrix:
    """Cocycles in C^m whose classes form a basis of H^m (which must be free)."""
    ring = C.ring
    dm1 = C.d(m + 1).dagger()   # C^m -> C^{m+1}
    dm = C.d(m).dagger()        # C^{m-1} -> C^m
    if dm1.is_zero() and dm.is_zero():
        return Matrix.identity(ring, C.rank(m))
    R = ring
    if ring is LZ:
        raise UnsupportedRing("middle cohomology over Z[t,t^-1] needs vanishing middle differentials")
    if not R.euclidean:
        raise UnsupportedRing(f"middle cohomology over {ring.tag}")
    Z = kernel_basis(dm1)                      # cocycles, a summand
    if Z.ncols == 0:
        return Z
    coords = solve_linear(Z, dm)               # coboundaries in cocycle coordinates
    if coords is None:
        raise StructureMismatch("coboundaries are not cocycles")
    U, S, V = smith_normal_form(coords)
    factors = [S[i, i] for i in range(min(S.shape)) if S[i, i] != 0]
    if any(not ring.is_unit(f) for f in factors):
        raise NotFree("middle cohomology has torsion")
    Uinv = inverse(U)
    return Z @ Uinv.col_slice(len(factors), Z.ncols)


def middle_form(X) -> MiddleForm:
    """The (-1)^m-symmetric form induced by phi_0 on H^m of a 2m-dimensional Poincaré complex."""
    if X.dim % 2:
        raise DimensionMismatch("middle form needs an even-dimensional complex")
    m = X.dim // 2
    C = X.complex
    x = middle_cohomology_basis(C, m)
    G = x.dagger() @ X.component(0, m) @ x
    eps = (-1) ** m
    return MiddleForm(EpsForm(G, eps), x, m)
