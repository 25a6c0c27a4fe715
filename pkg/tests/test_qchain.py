import random

from hypothesis import given
from hypothesis import strategies as st

from symsig import qchain as Q
from symsig import randomgen as G
from symsig.chain import ChainComplex, ChainMap
from symsig.linalg import Matrix
from symsig.rings import LZ, QQ, ZZ

seeds = st.integers(0, 10_000)
rings = st.sampled_from([ZZ, QQ, LZ])


def _setup(seed, ring, levels=3):
    rng = random.Random(seed)
    C = G.complex_(rng, ring, rng.randint(1, 3), max_rank=2)
    k = rng.randint(C.top, C.top + 2)
    return rng, C, k, G.qchain(rng, C, k, levels)


@given(seeds, rings)
def test_boundary_squares_to_zero(seed, ring):
    _, C, k, theta = _setup(seed, ring)
    assert Q.is_zero(Q.boundary(C, k - 1, Q.boundary(C, k, theta)))


@given(seeds, rings)
def test_boundary_is_linear(seed, ring):
    rng, C, k, a = _setup(seed, ring)
    b = G.qchain(rng, C, k, 2)
    lhs = Q.boundary(C, k, Q.add(C, k, a, b))
    rhs = Q.add(C, k - 1, Q.boundary(C, k, a), Q.boundary(C, k, b))
    assert Q.equal(C, k - 1, lhs, rhs)
    assert Q.is_zero(Q.sub(C, k, a, a))


@given(seeds, rings)
def test_push_commutes_with_boundary(seed, ring):
    rng, C, k, theta = _setup(seed, ring)
    D = G.complex_(rng, ring, C.top, max_rank=2)
    f = G.null_homotopic_map(rng, C, D)
    lhs = Q.boundary(D, k, Q.push(f, k, theta))
    rhs = Q.push(f, k - 1, Q.boundary(C, k, theta))
    assert Q.equal(D, k - 1, lhs, rhs)


@given(seeds, rings)
def test_push_is_functorial(seed, ring):
    rng, C, k, theta = _setup(seed, ring)
    one = ChainMap.identity(C)
    assert Q.equal(C, k, Q.push(one, k, theta), theta)
    minus = ChainMap(C, C, {i: -Matrix.identity(ring, C.rank(i)) for i in C.degrees()})
    assert Q.equal(C, k, Q.push(minus, k, theta), theta)


@given(seeds, rings)
def test_T_is_an_involution(seed, ring):
    _, C, k, theta = _setup(seed, ring, levels=1)
    for r in C.degrees():
        q = k - r
        if 0 <= q <= C.top:
            Tt = {q2: Q.T(C, k, theta, 0, q2) for q2 in C.degrees() if 0 <= k - q2 <= C.top}
            back = Q.T(C, k, (Tt,), 0, r)
            assert back == Q.comp(C, k, theta, 0, r)


@given(seeds, rings)
def test_json_roundtrip(seed, ring):
    _, C, k, theta = _setup(seed, ring)
    assert Q.equal(C, k, Q.from_json(C, k, Q.to_json(theta)), theta)


def test_single_level_boundary_by_hand():
    # C = Z in degree 0, k = 0: d(theta)_1 = -(theta_0 - T theta_0) = 0 for symmetric theta
    C = ChainComplex(ZZ, [2], {})
    sym = ({0: Matrix(ZZ, [[1, 2], [2, 3]])},)
    skew = ({0: Matrix(ZZ, [[0, 1], [-1, 0]])},)
    assert Q.is_zero(Q.boundary(C, 0, sym))
    bd = Q.boundary(C, 0, skew)
    assert Q.first_nonzero(bd)[:2] == (1, 0)
