"""Seeded random Poincaré pairs and the paired instances used by the property checks.

Pairs are thickenings of random symmetric complexes (Poincaré by construction), plus
closed form complexes in even dimensions, pushed along random ambient equivalences.
Every generator is deterministic in its seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from symsig import randomgen as G
from symsig.chain import ChainComplex, ChainMap, direct_sum_complex
from symsig.errors import DimensionMismatch
from symsig.linalg import Matrix, direct_sum, inverse
from symsig.rings import QQ, Ring
from symsig.structures import (PoincarePair, SymmetricComplex, certify_pair, cylinder_pair,
                               direct_sum_pairs, push_pair, thickening)

MAX_DIM = 5
MAX_RANK = 8


def ambient_equivalence(rng: random.Random, D: ChainComplex, pieces: int = 1) -> ChainMap:
    """An equivalence D -> D' where D' is D plus contractible pieces R -> R, in a random basis."""
    ring = D.ring
    top = max(D.top, 1)
    ext = [0] * (top + 1)
    units = []
    for i in sorted(rng.randint(1, top) for _ in range(pieces)):
        units.append((i, ext[i - 1], ext[i]))
        ext[i] += 1
        ext[i - 1] += 1
    rows = {i: [[ring.zero()] * ext[i] for _ in range(ext[i - 1])] for i in range(1, top + 1)}
    for i, r, c in units:
        rows[i][r][c] = ring.one()
    E = ChainComplex(ring, ext, {i: Matrix._raw(ring, rows[i], ext[i - 1], ext[i])
                                 for i in range(1, top + 1)})
    S = direct_sum_complex(D.padded(top), E)
    U = {i: G.unimodular(rng, ring, S.rank(i)) for i in S.degrees()}
    Uinv = {i: inverse(U[i]) for i in U}
    D2 = ChainComplex(ring, S.ranks, {i: U[i - 1] @ S.d(i) @ Uinv[i] for i in range(1, S.top + 1)})
    maps = {i: U[i] @ Matrix.identity(ring, D.rank(i)).vstack(Matrix.zeros(ring, ext[i], D.rank(i)))
            for i in S.degrees()}
    return ChainMap(D, D2, maps)


def _base_pair(rng: random.Random, ring: Ring, dim: int, closed_summand: bool) -> PoincarePair:
    if dim == 1:
        Z = G.form_structure(rng, ring, 0, nondegenerate=True)
        return cylinder_pair(Z)
    P = thickening(G.symmetric_complex(rng, ring, dim))
    if closed_summand and dim % 2 == 0:
        Z = G.form_structure(rng, ring, dim, nondegenerate=True)
        P = direct_sum_pairs(P, PoincarePair.closed(Z))
    return P


def _ranks_ok(P: PoincarePair, max_rank: int) -> bool:
    return (all(r <= max_rank for r in P.ambient.ranks)
            and all(r <= max_rank for r in P.boundary.complex.ranks))


def random_pair(seed: int, dim: int, max_rank: int = MAX_RANK, ring: Ring = QQ) -> PoincarePair:
    """A validator-certified Poincaré pair of dimension ``dim`` with module ranks <= max_rank."""
    if not 1 <= dim <= MAX_DIM:
        raise DimensionMismatch(f"dimension must lie in 1..{MAX_DIM}")
    if not 1 <= max_rank <= MAX_RANK:
        raise DimensionMismatch(f"max_rank must lie in 1..{MAX_RANK}")
    rng = random.Random(seed)
    for _ in range(200):
        P = _base_pair(rng, ring, dim, rng.random() < 0.5)
        if rng.random() < 0.5:
            P = push_pair(P, ambient_equivalence(rng, P.ambient))
        if _ranks_ok(P, max_rank):
            return certify_pair(P)
    # small rank bounds can be out of reach for the generator; fall back to a minimal pair
    return certify_pair(_small_pair(dim, ring))


def _small_pair(dim: int, ring: Ring) -> PoincarePair:
    """A closed form complex of rank <= 2 (even dim) or the empty closed complex (odd dim)."""
    from symsig.forms import complex_from_form, EpsForm
    if dim % 2 == 0:
        m = dim // 2
        eps = (-1) ** m
        mu = Matrix.diagonal(ring, [1]) if eps == 1 else Matrix(ring, [[0, 1], [-1, 0]])
        return PoincarePair.closed(complex_from_form(EpsForm(mu, eps), m))
    C = ChainComplex(ring, [0] * (dim + 1), {})
    return PoincarePair.closed(SymmetricComplex(C, dim, ()))


@dataclass(frozen=True)
class CommonBoundary:
    P: PoincarePair
    Q: PoincarePair


def common_boundary_pairs(seed: int, dim: int, ring: Ring = QQ) -> CommonBoundary:
    """Two pairs with identical boundary: P, and P plus a closed form complex pushed along
    a random ambient equivalence."""
    rng = random.Random(seed)
    P = _base_pair(rng, ring, dim, rng.random() < 0.5)
    Z = G.form_structure(rng, ring, dim, nondegenerate=True)
    Q = direct_sum_pairs(P, PoincarePair.closed(Z))
    Q = push_pair(Q, ambient_equivalence(rng, Q.ambient))
    return CommonBoundary(P, Q)


def equivalent_pair(P: PoincarePair, seed: int) -> PoincarePair:
    """P pushed along a random ambient equivalence with a contractible summand added."""
    rng = random.Random(seed)
    return push_pair(P, ambient_equivalence(rng, P.ambient, pieces=rng.randint(1, 2)))


@dataclass(frozen=True)
class TorusInstance:
    P: PoincarePair
    Q: PoincarePair
    w: ChainMap
    kind: str


def torus_instance(seed: int, dim: int = 4, ring: Ring = QQ) -> TorusInstance:
    """Pairs P, Q with common boundary B1 + B2 and a structure automorphism w of the boundary:
    -1, 1 + (-1), or the swap when B1 = B2."""
    rng = random.Random(seed)
    X1 = G.symmetric_complex(rng, ring, dim)
    kind = ("negate", "sign", "swap")[seed % 3]
    X2 = X1 if kind == "swap" else G.symmetric_complex(rng, ring, dim)
    T1, T2 = thickening(X1), thickening(X2)
    P = direct_sum_pairs(T1, T2)
    Z = G.form_structure(rng, ring, dim, nondegenerate=True)
    Q = direct_sum_pairs(P, PoincarePair.closed(Z))
    Q = push_pair(Q, ambient_equivalence(rng, Q.ambient))
    C = P.boundary.complex
    maps = {}
    for i in C.degrees():
        a = T1.boundary.complex.rank(i)
        b = C.rank(i) - a
        Ia, Ib = Matrix.identity(ring, a), Matrix.identity(ring, b)
        if kind == "negate":
            maps[i] = -Matrix.identity(ring, a + b)
        elif kind == "sign":
            maps[i] = direct_sum(Ia, -Ib)
        else:
            maps[i] = Matrix.block(ring, [[None, Ia], [Ib, None]], [a, b], [a, b])
    return TorusInstance(P, Q, ChainMap(C, C, maps), kind)
