import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symsig import randomgen as G
from symsig.chain import ChainComplex, is_equivalence
from symsig.errors import DimensionMismatch, NotLagrangian, NotSplittable, StructureMismatch
from symsig.fixtures import d1_pair, diagonal_lagrangian, disk2, form_diag
from symsig.forms import Lagrangian, diagonal_form, hyperbolic, make_lagrangian, middle_form
from symsig.instances import random_pair
from symsig.linalg import Matrix
from symsig.rings import LZ, QQ, ZZ, cyclic_group_ring
from symsig.sigma import (check_witness, difference_formation, digest, fingerprint,
                          sigma_even, sigma_odd, split_middle)
from symsig.structures import PoincarePair, SymmetricComplex, validate_symmetric_complex

seeds = st.integers(0, 10_000)


def test_split_reports_the_offending_factor():
    C = ChainComplex(ZZ, [1, 1], {1: Matrix(ZZ, [[3]])})
    with pytest.raises(NotSplittable) as exc:
        split_middle(C, 1)
    assert exc.value.factor == 3


def test_split_over_laurent_with_vanishing_middle():
    C = d1_pair("t").boundary.complex
    W = split_middle(C, 0)
    assert W.split == C and check_witness(W)


@given(seeds, st.sampled_from([ZZ, QQ]), st.integers(0, 3))
def test_witnesses_verify(seed, ring, variant):
    rng = random.Random(seed)
    C = G.complex_(rng, ring, 3, max_rank=2)
    m = rng.randint(1, 3)
    try:
        W = split_middle(C, m, variant=variant)
    except NotSplittable:
        return
    assert check_witness(W)
    assert W.split.d(m).is_zero()
    assert is_equivalence(W.u) and is_equivalence(W.v)


def test_variants_give_distinct_witnesses():
    C = random_pair(4, 4).boundary.complex
    digests = {split_middle(C, 2, variant=v).digest() for v in range(4)}
    assert len(digests) == 4


@given(seeds)
def test_closed_pairs_keep_their_signature(seed):
    rng = random.Random(seed)
    Z = G.form_structure(rng, QQ, 4, nondegenerate=True)
    res = sigma_even(PoincarePair.closed(Z))
    assert res.fingerprint.signatures == fingerprint(Z).signatures
    assert validate_symmetric_complex(res.representative).ok


def test_disk_has_zero_signature():
    res = sigma_even(disk2())
    assert res.dim == 2
    assert res.fingerprint.signatures == (0, 0)


def test_sigma_even_needs_even_dimension_and_matching_witness():
    with pytest.raises(DimensionMismatch):
        sigma_even(random_pair(0, 3))
    P = random_pair(0, 2)
    W = split_middle(disk2().boundary.complex, 1)
    assert W.original != P.boundary.complex
    with pytest.raises(StructureMismatch):
        sigma_even(P, W)


def test_sigma_odd_on_intervals():
    K = diagonal_lagrangian()
    for end in ("t", "e"):
        res = sigma_odd(d1_pair(end), K)
        assert res.dim == 1
        assert validate_symmetric_complex(res.representative).ok
        assert res.provenance["lagrangian"] == digest(K.to_json())
    with pytest.raises(DimensionMismatch):
        sigma_odd(disk2(), K)


def test_sigma_odd_rejects_foreign_lagrangians():
    with pytest.raises(NotLagrangian):
        sigma_odd(d1_pair("t"), diagonal_lagrangian(diagonal_form(LZ, [-1, 1])))


def test_sigma_odd_stabilizes_by_hyperbolic_summand():
    P = d1_pair("e")
    F = middle_form(P.boundary).form
    H = F + hyperbolic(LZ, 1)
    j = Matrix(LZ, [[1, 0], [1, 0], [0, 1], [0, 0]])
    res = sigma_odd(P, make_lagrangian(H, j))
    assert res.provenance["stabilization"] == 1
    assert validate_symmetric_complex(res.representative).ok


def test_difference_formation_requires_lagrangian():
    F = form_diag()
    K = diagonal_lagrangian(F)
    assert difference_formation(F, K, Matrix.identity(LZ, 2)).L.j == K.j
    with pytest.raises(NotLagrangian):
        difference_formation(F, Lagrangian(F, Matrix.column(LZ, [1, 0]), None),
                             Matrix.identity(LZ, 2))


def test_fingerprint_over_cyclic_rings_uses_augmentation_only():
    R = cyclic_group_ring(2)
    X = SymmetricComplex(ChainComplex(R, [1], {}), 0, [{0: Matrix(R, [[1]])}])
    fp = fingerprint(X)
    assert fp.signatures[0] == 1 and fp.signatures[1] is None


def test_provenance_records_inputs():
    res = sigma_even(random_pair(2, 2))
    assert set(res.provenance) >= {"input", "split"}
    assert res.to_json() == sigma_even(random_pair(2, 2)).to_json()
