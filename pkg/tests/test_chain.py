import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symsig import randomgen as G
from symsig.chain import (ChainComplex, ChainMap, Homology, betti, direct_sum_complex,
                          dual_complex, find_null_homotopy, homology, induce, is_acyclic,
                          is_equivalence, mapping_cone, reduce_by_units, suspend)
from symsig.errors import DimensionMismatch, NotAChainComplex, NotAChainMap, UnsupportedRing
from symsig.linalg import Matrix
from symsig.rings import LQ, LZ, QQ, ZZ, Laurent, RingMap

T = Laurent.monomial(1)
seeds = st.integers(0, 10_000)


def rp2() -> ChainComplex:
    # cellular chains of RP^2: one cell in each degree, d1 = 0, d2 = 2
    return ChainComplex(ZZ, [1, 1, 1], {1: Matrix(ZZ, [[0]]), 2: Matrix(ZZ, [[2]])})


def torus2() -> ChainComplex:
    return ChainComplex(ZZ, [1, 2, 1], {})


def test_cellular_homology():
    C = rp2()
    assert homology(C, 0) == Homology(1)
    assert homology(C, 1) == Homology(0, (2,))
    assert homology(C, 2) == Homology(0)
    assert betti(torus2()) == [1, 2, 1]
    assert betti(induce(C, RingMap.inclusion(ZZ, QQ))) == [1, 0, 0]


def test_laurent_circle_homology_and_evaluations():
    S1 = ChainComplex(LQ, [1, 1], {1: Matrix(LQ, [[T - 1]])})
    assert homology(S1, 0) == Homology(0, (LQ.normal_unit(T - 1) * (T - 1),))
    ev = induce(S1, RingMap.evaluation(LQ, 1))
    assert betti(ev) == [1, 1]
    assert betti(induce(S1, RingMap.evaluation(LQ, -1))) == [0, 0]


def test_constructor_rejects_bad_input():
    with pytest.raises(NotAChainComplex):
        ChainComplex(ZZ, [1, 1, 1], {1: Matrix(ZZ, [[1]]), 2: Matrix(ZZ, [[1]])})
    with pytest.raises(DimensionMismatch):
        ChainComplex(ZZ, [1, 2], {1: Matrix(ZZ, [[1]])})
    C = rp2()
    with pytest.raises(NotAChainMap):
        ChainMap(C, C, {0: Matrix(ZZ, [[1]]), 1: Matrix(ZZ, [[0]]), 2: Matrix(ZZ, [[1]])})


@given(seeds, st.sampled_from([ZZ, QQ]))
def test_random_complexes_are_complexes(seed, ring):
    C = G.complex_(random.Random(seed), ring, 3)
    for i in range(2, C.top + 1):
        assert (C.d(i - 1) @ C.d(i)).is_zero()
    assert ChainComplex.from_json(C.to_json()) == C


@given(seeds, st.sampled_from([ZZ, QQ]))
def test_reduce_by_units_preserves_homology(seed, ring):
    C = G.complex_(random.Random(seed), ring, 3)
    R = reduce_by_units(C)
    for i in C.degrees():
        assert homology(R, i) == homology(C, i)
    if ring is QQ:
        assert all(R.d(i).is_zero() for i in range(1, R.top + 1))


@given(seeds)
def test_dual_is_an_involution_up_to_sign(seed):
    C = G.complex_(random.Random(seed), QQ, 3)
    n = C.top
    assert dual_complex(dual_complex(C, n), n) == C
    Cs = dual_complex(C, n, signed=True)
    for i in range(2, n + 1):
        assert (Cs.d(i - 1) @ Cs.d(i)).is_zero()


@given(seeds, st.sampled_from([ZZ, QQ]))
def test_identity_is_an_equivalence_and_its_cone_is_acyclic(seed, ring):
    C = G.complex_(random.Random(seed), ring, 3)
    one = ChainMap.identity(C)
    assert is_equivalence(one)
    cone = mapping_cone(one)
    for i in range(2, cone.top + 1):
        assert (cone.d(i - 1) @ cone.d(i)).is_zero()
    assert is_acyclic(cone)


@given(seeds)
def test_null_homotopic_maps_have_null_homotopies(seed):
    rng = random.Random(seed)
    C = G.complex_(rng, ZZ, 3)
    D = G.complex_(rng, ZZ, 3)
    f = G.null_homotopic_map(rng, C, D)
    assert f.first_defect() is None
    h = find_null_homotopy(f)
    assert h is not None
    for i in range(max(C.top, D.top) + 1):
        lhs = f[i]
        rhs = D.d(i + 1) @ h.get(i, Matrix.zeros(ZZ, D.rank(i + 1), C.rank(i)))
        if i >= 1:
            rhs = rhs + h.get(i - 1, Matrix.zeros(ZZ, D.rank(i), C.rank(i - 1))) @ C.d(i)
        assert lhs == rhs


def test_non_null_homotopic_map():
    C = ChainComplex(ZZ, [1], {})
    assert find_null_homotopy(ChainMap.identity(C)) is None
    assert not is_equivalence(ChainMap.zero(C, C))


def test_multiplication_by_two_is_not_an_equivalence_over_z():
    C = ChainComplex(ZZ, [1], {})
    two = ChainMap(C, C, {0: Matrix(ZZ, [[2]])})
    assert not is_equivalence(two)
    CQ = ChainComplex(QQ, [1], {})
    assert is_equivalence(ChainMap(CQ, CQ, {0: Matrix(QQ, [[2]])}))


def test_laurent_over_z_acyclicity_is_partial():
    C = ChainComplex(LZ, [1, 1], {1: Matrix(LZ, [[T]])})
    assert is_acyclic(C)
    # rationally nonzero homology decides; 2 is a unit only after tensoring with Q
    assert not is_acyclic(ChainComplex(LZ, [1, 1], {1: Matrix(LZ, [[1 + T + T * T]])}))
    with pytest.raises(UnsupportedRing):
        is_acyclic(ChainComplex(LZ, [1, 1], {1: Matrix(LZ, [[2]])}))


def test_sums_and_suspension():
    C = direct_sum_complex(rp2(), torus2())
    assert C.ranks == (2, 3, 2)
    assert betti(C) == [2, 2, 1]
    S = suspend(rp2(), 2)
    assert S.ranks == (0, 0, 1, 1, 1)
    assert homology(S, 3) == Homology(0, (2,))


def test_chain_map_algebra():
    C = rp2()
    one = ChainMap.identity(C)
    assert (one + one) - one == one
    assert one @ one == one
    assert ChainMap.from_json(one.to_json()) == one
