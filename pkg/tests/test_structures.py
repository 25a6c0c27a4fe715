import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symsig import randomgen as G
from symsig.chain import ChainComplex, ChainMap, betti
from symsig.errors import DimensionMismatch, StructureMismatch
from symsig.fixtures import circle, d1_pair, disk2, s0_boundary
from symsig.instances import ambient_equivalence
from symsig.linalg import Matrix
from symsig.rings import QQ, RingMap
from symsig.sigma import fingerprint
from symsig.structures import (PoincarePair, SymmetricComplex, boundary_of, certify,
                               certify_pair, cylinder_pair, direct_sum_structures, double,
                               glue_pairs, induce_structure, mapping_torus, negate, push_pair,
                               push_structure, thickening, validate_pair,
                               validate_symmetric_complex)

seeds = st.integers(0, 10_000)
dims = st.integers(2, 4)


def _closed(seed, dim):
    return boundary_of(G.symmetric_complex(random.Random(seed), QQ, dim))


def _scalar(X, c):
    C = X.complex
    return ChainMap(C, C, {i: Matrix.identity(QQ, C.rank(i)).scale(QQ(c)) for i in C.degrees()})


def test_fixtures_validate():
    assert validate_symmetric_complex(s0_boundary()).ok
    assert validate_symmetric_complex(circle()).ok
    for P in (d1_pair("t"), d1_pair("e"), disk2()):
        assert validate_pair(P).ok, validate_pair(P).text()


def test_interval_gluings_are_circles():
    # e u e is the untwisted circle; t u e carries the generator of the cover
    untwisted = fingerprint(glue_pairs(d1_pair("e"), d1_pair("e")))
    twisted = fingerprint(glue_pairs(d1_pair("t"), d1_pair("e")))
    assert untwisted.betti == ((1, 1), (1, 1))
    assert twisted.betti == ((1, 1), (0, 0)) == fingerprint(circle()).betti


def test_double_of_disk_is_a_sphere():
    S2 = double(disk2())
    assert validate_symmetric_complex(S2).ok
    assert fingerprint(S2).betti[0] == (1, 0, 1)


@given(seeds, dims)
def test_boundaries_and_thickenings_are_poincare(seed, dim):
    X = G.symmetric_complex(random.Random(seed), QQ, dim)
    assert validate_symmetric_complex(X, poincare=False).ok
    assert validate_symmetric_complex(boundary_of(X)).ok
    assert validate_pair(thickening(X)).ok


@given(seeds, dims)
def test_double_is_poincare_with_zero_signature(seed, dim):
    P = thickening(G.symmetric_complex(random.Random(seed), QQ, dim))
    D = double(P)
    assert validate_symmetric_complex(D).ok
    assert fingerprint(D).signatures == (0, 0)


@given(seeds, st.integers(1, 4))
def test_negation_and_sums(seed, dim):
    Y = _closed(seed, dim + 1)
    assert negate(negate(Y)) == Y
    S = direct_sum_structures(Y, negate(Y))
    assert validate_symmetric_complex(S).ok
    assert fingerprint(S).signatures == (0, 0)


@given(seeds, dims)
def test_push_along_equivalence(seed, dim):
    rng = random.Random(seed)
    P = thickening(G.symmetric_complex(rng, QQ, dim))
    g = ambient_equivalence(rng, P.ambient, 2)
    P2 = push_pair(P, g)
    assert validate_pair(P2).ok
    assert P2.ambient.total_rank() == P.ambient.total_rank() + 4
    Y = P.boundary
    assert push_structure(ChainMap.identity(Y.complex), Y) == Y


@given(seeds, st.integers(2, 4))
def test_mapping_torus_betti_numbers(seed, dim):
    Y = _closed(seed, dim)
    b = betti(Y.complex)
    T1 = mapping_torus(Y, ChainMap.identity(Y.complex))
    assert validate_symmetric_complex(T1).ok
    # T(1) is Y x S^1 rationally; T(-1) is rationally acyclic
    assert betti(T1.complex) == [x + y for x, y in zip(b + [0], [0] + b)]
    Tm = mapping_torus(Y, _scalar(Y, -1))
    assert validate_symmetric_complex(Tm).ok
    assert not any(betti(Tm.complex))


def test_mapping_torus_rejects_non_automorphism():
    Y = _closed(3, 2)
    with pytest.raises(StructureMismatch):
        mapping_torus(Y, _scalar(Y, 2))


@given(seeds, st.integers(1, 3))
def test_cylinder_pair(seed, dim):
    Y = _closed(seed, dim + 1)
    P = cylinder_pair(Y)
    assert validate_pair(P).ok
    assert P.dim == Y.dim + 1


def test_validator_reports_name_and_degree():
    P = d1_pair("t")
    bad = PoincarePair(P.boundary, P.ambient, P.inclusion, [{0: P.component(0, 0)}])
    rep = validate_pair(bad)
    assert not rep.ok and rep.first_failure.check == "pair relation"
    assert rep.first_failure.degree == 0
    with pytest.raises(StructureMismatch):
        certify_pair(bad)
    assert "FAIL" in rep.text()


def test_non_poincare_structure_fails_duality():
    C = ChainComplex(QQ, [2], {})
    X = SymmetricComplex(C, 0, [{0: Matrix(QQ, [[1, 0], [0, 0]])}])
    rep = validate_symmetric_complex(X)
    assert rep["duality equivalence"].passed is False
    with pytest.raises(StructureMismatch):
        certify(X)


def test_boundary_needs_empty_ends():
    with pytest.raises(DimensionMismatch):
        boundary_of(SymmetricComplex(ChainComplex(QQ, [1], {}), 0, [{0: Matrix(QQ, [[1]])}]))


def test_induced_structure_over_q():
    X = glue_pairs(d1_pair("t"), d1_pair("e"))
    for w in (1, -1):
        Y = induce_structure(X, RingMap.evaluation(X.ring, w, QQ))
        assert validate_symmetric_complex(Y).ok


def test_json_roundtrip():
    P = d1_pair("t")
    assert PoincarePair.from_json(P.to_json()) == P
    X = circle()
    assert SymmetricComplex.from_json(X.to_json()) == X
