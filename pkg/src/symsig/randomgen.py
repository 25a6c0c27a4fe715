"""Seeded random matrices, complexes and symmetric chains for tests and the CLI."""
from __future__ import annotations

import random

from symsig.chain import ChainComplex, ChainMap
from symsig.linalg import Matrix, inverse
from symsig.rings import Ring


def matrix(rng: random.Random, ring: Ring, nrows: int, ncols: int, height: int = 2,
           density: float = 0.7) -> Matrix:
    z = ring.zero()
    return Matrix._raw(ring, [[ring.random_element(rng, height) if rng.random() < density else z
                               for _ in range(ncols)] for _ in range(nrows)], nrows, ncols)


def unimodular(rng: random.Random, ring: Ring, n: int, steps: int | None = None) -> Matrix:
    """Product of elementary matrices and sign flips: invertible over any ring."""
    rows = [list(r) for r in Matrix.identity(ring, n).rows]
    if n == 0:
        return Matrix.identity(ring, 0)
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            if rng.random() < 0.3:
                rows[i] = [-a for a in rows[i]]
            continue
        c = ring.random_element(rng, 1)
        if c == 0:
            c = ring.one()
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return Matrix._raw(ring, rows, n, n)


def complex_(rng: random.Random, ring: Ring, top: int, max_rank: int = 3,
             pieces: int | None = None) -> ChainComplex:
    """A random complex: a direct sum of two-term pieces R^a -> R^b, then a basis change.

    Two-term pieces make d^2 = 0 automatic; unit pieces give contractible summands.
    """
    blocks = []  # (degree i, matrix R^a -> R^b sitting in degrees i -> i-1)
    count = pieces if pieces is not None else rng.randint(1, max(1, top + 2))
    for _ in range(count):
        if top == 0:
            i = 0
        else:
            i = rng.randint(0, top)
        if i == 0:
            blocks.append((0, Matrix.zeros(ring, 0, rng.randint(1, max_rank))))
            continue
        a, b = rng.randint(1, max_rank), rng.randint(1, max_rank)
        if rng.random() < 0.3:
            a = b = 1
            blocks.append((i, Matrix.identity(ring, 1)))
        else:
            blocks.append((i, matrix(rng, ring, b, a, density=0.6)))
    ranks = [0] * (top + 1)
    for i, m in blocks:
        ranks[i] += m.ncols
        if i >= 1:
            ranks[i - 1] += m.nrows
    offs = [0] * (top + 1)
    rows = {i: [[ring.zero()] * ranks[i] for _ in range(ranks[i - 1])] for i in range(1, top + 1)}
    for i, m in blocks:
        c0 = offs[i]
        offs[i] += m.ncols
        if i == 0:
            continue
        r0 = offs[i - 1]
        offs[i - 1] += m.nrows
        for r in range(m.nrows):
            for c in range(m.ncols):
                rows[i][r0 + r][c0 + c] = m[r, c]
    P = {i: unimodular(rng, ring, ranks[i]) for i in range(top + 1)}
    Pinv = {i: inverse(P[i]) for i in P}
    diffs = {i: P[i - 1] @ Matrix._raw(ring, rows[i], ranks[i - 1], ranks[i]) @ Pinv[i]
             for i in range(1, top + 1)}
    return ChainComplex(ring, ranks, diffs)


def qchain(rng: random.Random, C: ChainComplex, k: int, levels: int, height: int = 2):
    from symsig import qchain as Q
    return Q.normalize(C, k, [{r: matrix(rng, C.ring, C.rank(r), C.rank(k - r + s), height)
                               for r in C.degrees() if 0 <= k - r + s <= C.top}
                              for s in range(levels)])


def null_homotopic_map(rng: random.Random, C: ChainComplex, D: ChainComplex) -> ChainMap:
    """f = d h + h d for a random h: always a chain map C -> D."""
    ring = C.ring
    h = {i: matrix(rng, ring, D.rank(i + 1), C.rank(i), density=0.5) for i in range(C.top + 1)}
    maps = {}
    for i in range(C.top + 1):
        m = D.d(i + 1) @ h[i]
        if i >= 1:
            m = m + h[i - 1] @ C.d(i)
        maps[i] = m
    return ChainMap(C, D, maps, check=False)


def form_structure(rng: random.Random, ring: Ring, n: int, max_rank: int = 3,
                   nondegenerate: bool = False):
    """n = 2m: a structure concentrated in degree m with phi_0 = A + eps A^*.

    With ``nondegenerate`` the form is a random diagonal form (or hyperbolic for eps = -1)
    in a random basis, so the result is Poincaré over Q.
    """
    from symsig.structures import SymmetricComplex
    m = n // 2
    eps = -1 if m % 2 else 1
    k = rng.randint(1, max_rank)
    if nondegenerate:
        if eps == 1:
            mu = Matrix.diagonal(ring, [ring(rng.choice([1, -1]) * rng.randint(1, 3))
                                        for _ in range(k)])
        else:
            k = 2 * rng.randint(1, max(1, max_rank // 2))
            h = k // 2
            I = Matrix.identity(ring, h)
            mu = Matrix.block(ring, [[None, I], [-I, None]], [h, h], [h, h])
        P = unimodular(rng, ring, k)
        mu = P.dagger() @ mu @ P
    else:
        A = matrix(rng, ring, k, k)
        mu = A + A.dagger().scale(eps)
    ranks = [0] * (n + 1)
    ranks[m] = k
    return SymmetricComplex(ChainComplex(ring, ranks, {}), n, [{m: mu}])


def symmetric_complex(rng: random.Random, ring: Ring, n: int, max_rank: int = 2):
    """A random n-dimensional symmetric complex (not necessarily Poincaré) with C_0 = C_n = 0.

    phi is the boundary of a random chain, plus (for even n) the push of a form structure
    along a null-homotopic map and a direct summand carrying a form.
    """
    from symsig import qchain as Q
    from symsig.chain import suspend
    from symsig.structures import SymmetricComplex, direct_sum_structures
    inner = complex_(rng, ring, max(n - 2, 0), max_rank=max_rank)
    C = suspend(inner).padded(n)
    chi = qchain(rng, C, n + 1, n + 2)
    phi = Q.boundary(C, n + 1, chi)
    if n % 2 == 0 and n >= 2:
        F = form_structure(rng, ring, n, max_rank=max_rank)
        f = null_homotopic_map(rng, F.complex, C)
        phi = Q.add(C, n, phi, Q.push(f, n, F.phi))
        return direct_sum_structures(SymmetricComplex(C, n, phi), F)
    return SymmetricComplex(C, n, phi)
