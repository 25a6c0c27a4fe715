"""Symmetric signatures of Poincaré pairs: split the middle differential, cap the
boundary with an algebraic nullbordism, and glue.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

from symsig import qchain as Q
from symsig.chain import ChainComplex, ChainMap, betti
from symsig.errors import (DimensionMismatch, NotLagrangian, NotSplittable, StructureMismatch,
                           UnsupportedRing)
from symsig.forms import (EpsForm, Formation, Lagrangian, coordinate_lagrangian,
                          complex_from_form, formation_from_automorphism, hyperbolic,
                          is_lagrangian, middle_form, nullbordism_from_lagrangian, signature,
                          transport_lagrangian)
from symsig.linalg import Matrix, direct_sum, inverse, smith_normal_form
from symsig.randomgen import unimodular
from symsig.rings import QQ, ZZ, RingMap
from symsig.structures import (PoincarePair, SymmetricComplex, direct_sum_pairs, glue_pairs,
                               induce_structure, validate_symmetric_complex)

__all__ = ["SplitWitness", "split_middle", "check_witness", "Fingerprint", "fingerprint",
           "SigmaResult", "sigma_even", "sigma_odd", "difference_formation",
           "transport_lagrangian", "digest"]


def digest(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# --------------------------------------------------------------------------
# splitting the middle differential


@dataclass(frozen=True, eq=False)
class SplitWitness:
    """u: C -> D and v: D -> C with u v = 1 and 1 - v u = d h + h d.

    D has d_m = 0 (and d_{m+1} = 0 when ``odd``). ``homotopy`` maps degree i to
    the matrix h_i: C_i -> C_{i+1}.
    """
    original: ChainComplex
    split: ChainComplex
    u: ChainMap
    v: ChainMap
    homotopy: dict
    degree: int
    odd: bool = False
    variant: int = 0

    def to_json(self) -> dict:
        return {"degree": self.degree, "odd": self.odd, "variant": self.variant,
                "split": self.split.to_json(),
                "u": {str(i): m.to_json() for i, m in sorted(self.u.maps.items())},
                "v": {str(i): m.to_json() for i, m in sorted(self.v.maps.items())}}

    def digest(self) -> str:
        return digest(self.to_json())


def _identity_witness(C: ChainComplex, m: int, odd: bool) -> SplitWitness:
    one = ChainMap.identity(C)
    return SplitWitness(C, C, one, one, {}, m, odd)


def _split_once(C: ChainComplex, m: int, rng: random.Random | None) -> SplitWitness:
    """Kill d_m by splitting off the contractible part R^r -> R^r (needs unit invariant factors)."""
    ring = C.ring
    d = C.d(m)
    if d.is_zero():
        return _identity_witness(C, m, False)
    if not ring.euclidean:
        raise UnsupportedRing(f"splitting a nonzero differential over {ring.tag}")
    a, b = C.rank(m - 1), C.rank(m)
    P = unimodular(rng, ring, b) if rng else Matrix.identity(ring, b)
    R = unimodular(rng, ring, a) if rng else Matrix.identity(ring, a)
    U, S, V = smith_normal_form(R @ d @ P)
    U, V = U @ R, P @ V
    factors = [S[i, i] for i in range(min(S.shape)) if S[i, i] != 0]
    for f in factors:
        if not ring.is_unit(f):
            raise NotSplittable(f"invariant factor {f!r} of d_{m} is not a unit", factor=f)
    r = len(factors)
    scale = Matrix.diagonal(ring, [ring.unit_inverse(f) for f in factors] + [ring.one()] * (a - r))
    U = scale @ U                       # now U d V = [[I_r, 0], [0, 0]]
    Uinv, Vinv = inverse(U), inverse(V)
    u_m, u_m1 = Vinv.row_slice(r, b), U.row_slice(r, a)
    v_m, v_m1 = V.col_slice(r, b), Uinv.col_slice(r, a)
    ranks = list(C.ranks)
    ranks[m] -= r
    ranks[m - 1] -= r
    diffs = {i: C.d(i) for i in range(1, C.top + 1)}
    diffs[m] = Matrix.zeros(ring, ranks[m - 1], ranks[m])
    if m + 1 <= C.top:
        diffs[m + 1] = u_m @ C.d(m + 1)
    if m - 1 >= 1:
        diffs[m - 1] = C.d(m - 1) @ v_m1
    D = ChainComplex(ring, ranks, diffs, check=False)
    umaps = {i: Matrix.identity(ring, C.rank(i)) for i in C.degrees()}
    vmaps = dict(umaps)
    umaps[m], umaps[m - 1] = u_m, u_m1
    vmaps[m], vmaps[m - 1] = v_m, v_m1
    h = {m - 1: V.col_slice(0, r) @ U.row_slice(0, r)}
    return SplitWitness(C, D, ChainMap(C, D, umaps, check=False),
                        ChainMap(D, C, vmaps, check=False), h, m, False)


def _rebase(W: SplitWitness, m: int, rng: random.Random) -> SplitWitness:
    """Compose with a random basis change of D in degrees m and m-1 (keeps d_m = 0)."""
    D, ring = W.split, W.split.ring
    P = unimodular(rng, ring, D.rank(m))
    R = unimodular(rng, ring, D.rank(m - 1)) if m >= 1 else None
    Pinv = inverse(P)
    diffs = {i: D.d(i) for i in range(1, D.top + 1)}
    if m + 1 <= D.top:
        diffs[m + 1] = P @ D.d(m + 1)
    if m >= 1:
        Rinv = inverse(R)
        diffs[m] = R @ D.d(m) @ Pinv
        if m - 1 >= 1:
            diffs[m - 1] = D.d(m - 1) @ Rinv
    D2 = ChainComplex(ring, D.ranks, diffs, check=False)
    fmaps = {i: Matrix.identity(ring, D.rank(i)) for i in D.degrees()}
    gmaps = dict(fmaps)
    if m <= D.top:
        fmaps[m], gmaps[m] = P, Pinv
    if m >= 1:
        fmaps[m - 1], gmaps[m - 1] = R, Rinv
    f = ChainMap(D, D2, fmaps, check=False)
    g = ChainMap(D2, D, gmaps, check=False)
    return SplitWitness(W.original, D2, f @ W.u, W.v @ g, W.homotopy, W.degree, W.odd, W.variant)


def _compose(W1: SplitWitness, W2: SplitWitness, odd: bool) -> SplitWitness:
    """W2 splits W1.split further; h = h1 + v1 h2 u1."""
    C = W1.original
    h = {}
    for i in set(W1.homotopy) | set(W2.homotopy):
        term = W1.homotopy.get(i, Matrix.zeros(C.ring, C.rank(i + 1), C.rank(i)))
        if i in W2.homotopy:
            term = term + W1.v[i + 1] @ W2.homotopy[i] @ W1.u[i]
        h[i] = term
    return SplitWitness(C, W2.split, W2.u @ W1.u, W1.v @ W2.v, h, W1.degree, odd)


def split_middle(C: ChainComplex, m: int, variant: int = 0, odd: bool = False) -> SplitWitness:
    """Replace C by an equivalent D with d_m = 0 (and d_{m+1} = 0 when ``odd``).

    Possible exactly when the invariant factors of d_m (and d_{m+1}) are units.
    ``variant`` > 0 conjugates by seeded unimodular matrices to produce a different witness.
    """
    rng = random.Random(variant) if variant else None
    if odd:
        W = _split_once(C, m + 1, rng)
        W2 = _split_once(W.split, m, rng)
        W = _compose(W, W2, True)
    else:
        W = _split_once(C, m, rng)
    if rng is not None:
        W = _rebase(W, m, rng)
    return SplitWitness(W.original, W.split, W.u, W.v, W.homotopy, m, odd, variant)


def check_witness(W: SplitWitness) -> bool:
    """u, v chain maps, u v = 1, 1 - v u = d h + h d, and the required differentials vanish."""
    C, D = W.original, W.split
    if W.u.first_defect() is not None or W.v.first_defect() is not None:
        return False
    if W.u @ W.v != ChainMap.identity(D):
        return False
    if not D.d(W.degree).is_zero() or (W.odd and not D.d(W.degree + 1).is_zero()):
        return False
    vu = W.v @ W.u
    for i in C.degrees():
        lhs = Matrix.identity(C.ring, C.rank(i)) - vu[i]
        rhs = Matrix.zeros(C.ring, C.rank(i), C.rank(i))
        if i in W.homotopy:
            rhs = rhs + C.d(i + 1) @ W.homotopy[i]
        if i - 1 in W.homotopy:
            rhs = rhs + W.homotopy[i - 1] @ C.d(i)
        if lhs != rhs:
            return False
    return True


# --------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    """Evaluation signatures at t = +1, -1 and rational Betti numbers after evaluation.

    For rings without t both evaluations coincide with the rationalization.
    Signatures are 0 unless the dimension is divisible by 4.
    """
    ring: str
    dim: int
    signatures: tuple
    betti: tuple

    def to_json(self) -> dict:
        return {"ring": self.ring, "dim": self.dim, "signatures": list(self.signatures),
                "betti": [list(b) if b is not None else None for b in self.betti]}

    def signature_part(self) -> tuple:
        return self.signatures


def _rationalize(X: SymmetricComplex, omega: int):
    ring = X.ring
    if ring is QQ:
        return X
    if ring is ZZ:
        return induce_structure(X, RingMap.inclusion(ZZ, QQ))
    if ring.laurent:
        return induce_structure(X, RingMap.evaluation(ring, omega, QQ))
    if omega == 1:
        Y = induce_structure(X, RingMap.augmentation(ring))
        return _rationalize(Y, 1)
    return None


def rational_signature(X: SymmetricComplex) -> int:
    """Signature of the middle form of a complex over Q (0 unless dim = 0 mod 4)."""
    if X.dim % 4:
        return 0
    return signature(middle_form(X).form)


def fingerprint(X: SymmetricComplex) -> Fingerprint:
    sigs, bettis = [], []
    for omega in (1, -1):
        Y = _rationalize(X, omega)
        if Y is None:
            sigs.append(None)
            bettis.append(None)
            continue
        sigs.append(rational_signature(Y))
        bettis.append(tuple(betti(Y.complex)))
    return Fingerprint(X.ring.tag, X.dim, tuple(sigs), tuple(bettis))


# --------------------------------------------------------------------------
# sigma


@dataclass(frozen=True, eq=False)
class SigmaResult:
    representative: SymmetricComplex
    fingerprint: Fingerprint
    provenance: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.representative.dim

    def to_json(self) -> dict:
        return {"representative": self.representative.to_json(),
                "fingerprint": self.fingerprint.to_json(), "provenance": self.provenance}


def _result(X: SymmetricComplex, P: PoincarePair, W: SplitWitness, **extra) -> SigmaResult:
    rep = validate_symmetric_complex(X)
    if rep.failed:
        raise StructureMismatch(f"sigma output failed validation: {rep.first_failure.check}")
    prov = {"input": digest(P.to_json()), "split": W.digest(), **extra}
    return SigmaResult(X, fingerprint(X), prov)


def _truncation_pair(Y: SymmetricComplex, m: int) -> PoincarePair:
    """The nullbordism (j: D -> D_{<m}, (0, psi)) of a (2m-1)-dimensional D with d_m = 0."""
    D, ring = Y.complex, Y.complex.ring
    Dbar = ChainComplex(ring, [D.rank(i) for i in range(m)], {i: D.d(i) for i in range(1, m)},
                        check=False)
    j = ChainMap(D, Dbar, {i: Matrix.identity(ring, D.rank(i)) for i in range(m)}, check=False)
    return PoincarePair(Y, Dbar, j, ())


def sigma_even(P: PoincarePair, witness: SplitWitness | None = None,
               variant: int = 0) -> SigmaResult:
    """Closed 2m-dimensional representative: P glued to the nullbordism of its split boundary."""
    n = P.dim
    if n % 2:
        raise DimensionMismatch("sigma_even needs an even-dimensional pair")
    m = n // 2
    X = P.boundary
    W = witness or split_middle(X.complex, m, variant)
    if W.original != X.complex or W.degree != m:
        raise StructureMismatch("split witness does not match the boundary")
    Y = SymmetricComplex(W.split, n - 1, Q.push(W.u, n - 1, X.phi))
    N = _truncation_pair(Y, m)
    out = glue_pairs(P, N, W.u)
    return _result(out, P, W)


def _stabilize(P: PoincarePair, F: EpsForm, basis: Matrix, L: Lagrangian, m: int):
    """Add the nullbordism of a hyperbolic complex so that L lives in F + H(k)."""
    k2 = L.form.rank - F.rank
    if k2 <= 0:
        return P, F, basis, 0
    if k2 % 2:
        raise NotLagrangian("Lagrangian host rank does not match the boundary form")
    k = k2 // 2
    H = hyperbolic(F.ring, k, F.eps)
    XH = complex_from_form(H, m)
    NH = nullbordism_from_lagrangian(XH, m, coordinate_lagrangian(H))
    return direct_sum_pairs(P, NH), F + H, direct_sum(basis, Matrix.identity(F.ring, 2 * k)), k


def sigma_odd(P: PoincarePair, L: Lagrangian, witness: SplitWitness | None = None,
              variant: int = 0) -> SigmaResult:
    """Closed (2m+1)-dimensional representative from a Lagrangian L of the boundary middle form.

    L is written in the cohomology basis returned by ``middle_form(P.boundary)``; when L
    lives in that form plus a hyperbolic H(k), P is first stabilized by the nullbordism of
    H(k) with its first coordinate Lagrangian.
    """
    n = P.dim
    if n % 2 == 0:
        raise DimensionMismatch("sigma_odd needs an odd-dimensional pair")
    m = (n - 1) // 2
    mf = middle_form(P.boundary)
    P, F, basis, k = _stabilize(P, mf.form, mf.basis, L, m)
    if L.form != F:
        raise NotLagrangian("Lagrangian is not in the boundary middle form")
    if not is_lagrangian(F, L.j):
        raise NotLagrangian(is_lagrangian(F, L.j).reason)
    X = P.boundary
    W = witness or split_middle(X.complex, m, variant, odd=True)
    if W.original != X.complex or W.degree != m or not W.odd:
        raise StructureMismatch("split witness does not match the boundary")
    Y = SymmetricComplex(W.split, n - 1, Q.push(W.u, n - 1, X.phi))
    FD = EpsForm(Y.component(0, m), F.eps)
    KD = W.v[m].dagger() @ basis @ L.j
    chk = is_lagrangian(FD, KD)
    if not chk:
        raise NotLagrangian(f"transported Lagrangian: {chk.reason}")
    N = nullbordism_from_lagrangian(Y, m, Lagrangian(FD, KD, chk.retraction))
    out = glue_pairs(P, N, W.u)
    return _result(out, P, W, lagrangian=digest(L.to_json()), stabilization=k)


def difference_formation(F: EpsForm, K: Lagrangian, A: Matrix) -> Formation:
    """The formation (F, K, A K) measuring the change of sigma under a boundary automorphism A."""
    if not is_lagrangian(F, K.j):
        raise NotLagrangian("K is not a Lagrangian of F")
    return formation_from_automorphism(F, K, A)
