from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symsig.errors import RingMismatch, UnsupportedRing
from symsig.rings import (LQ, LZ, QQ, ZZ, Laurent, RingMap, cyclic_group_ring, decode_element,
                          encode_element, ring_from_tag)

T = Laurent.monomial(1)

laurents = st.dictionaries(st.integers(-3, 3), st.integers(-5, 5), max_size=4).map(Laurent)
rationals = st.fractions(max_denominator=7).filter(lambda x: abs(x) < 50)


def test_laurent_product_frozen():
    # expanded independently (sympy) and frozen
    a = 1 + 2 * T - 3 * Laurent.monomial(-1)
    b = T * T - Laurent.monomial(-1)
    assert a * b == Laurent({3: 2, 2: 1, 1: -3, 0: -2, -1: -1, -2: 3})


def test_laurent_zero_terms_dropped():
    assert Laurent({1: 2, -1: 0}) == Laurent({1: 2})
    assert not Laurent({2: 1}) - Laurent({2: 1})
    assert Laurent({0: 5}) == 5


@given(laurents, laurents, laurents)
def test_laurent_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == 0


@given(laurents, laurents)
def test_involution_is_multiplicative_and_self_inverse(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a


@given(laurents, laurents, st.sampled_from([1, -1]))
def test_evaluation_is_a_ring_map(a, b, w):
    assert (a * b).evaluate(w) == a.evaluate(w) * b.evaluate(w)
    assert (a + b).evaluate(w) == a.evaluate(w) + b.evaluate(w)


@given(laurents, laurents.filter(bool))
def test_laurent_division_over_q(a, b):
    qa, qb = LQ(a), LQ(b)
    q, r = LQ.divmod(qa, qb)
    assert q * qb + r == qa
    assert not r or r.span() < qb.span()


def test_units():
    assert LZ.is_unit(LZ(-T))
    assert not LZ.is_unit(LZ(2 * T))
    assert LQ.is_unit(LQ(Laurent.monomial(3, Fraction(2, 5))))
    assert LZ.unit_inverse(LZ(T)) == Laurent.monomial(-1)
    assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
    assert QQ.is_unit(Fraction(1, 3)) and not QQ.is_unit(0)
    with pytest.raises(ZeroDivisionError):
        LZ.unit_inverse(LZ(1 + T))


def test_laurent_over_z_is_not_euclidean():
    with pytest.raises(UnsupportedRing):
        LZ.divmod(LZ(T), LZ(1 + T))
    assert LQ.euclidean and not LZ.euclidean
    assert LQ.has_half and not LZ.has_half


def test_coercion_rejects_foreign_values():
    with pytest.raises(RingMismatch):
        ZZ(Fraction(1, 2))
    with pytest.raises(RingMismatch):
        LZ("t")


def test_cyclic_group_ring():
    R = cyclic_group_ring(3)
    g = R.generator()
    assert g * g * g == R.one()
    assert R.conj(g) * g == R.one()
    assert R.is_unit(g) and not R.is_unit(R(2))
    assert R.unit_inverse(g) == g * g
    assert cyclic_group_ring(3) is R


@given(st.sampled_from(["Z", "Q", "Z[t,t^-1]", "Q[t,t^-1]", "Z[Z/4]", "Q[Z/2]"]), st.randoms())
def test_encode_roundtrip(tag, rnd):
    R = ring_from_tag(tag)
    x = R.random_element(rnd)
    ring, y = decode_element(encode_element(R, x))
    assert ring == R and y == x


def test_decode_rejects_noncanonical_laurent():
    with pytest.raises(RingMismatch):
        LZ.decode([[1, 1, 1], [0, 1, 1]])
    with pytest.raises(RingMismatch):
        LZ.decode([[0, 1, 2]])
    with pytest.raises(RingMismatch):
        ring_from_tag("Z[x]")


def test_ring_maps():
    ev = RingMap.evaluation(LZ, -1)
    assert ev(LZ(1 + 2 * T)) == -1
    assert RingMap.augmentation(LQ)(LQ(Laurent({-1: Fraction(1, 2), 2: 3}))) == Fraction(7, 2)
    inc = RingMap.inclusion(ZZ, QQ)
    assert inc(3) == Fraction(3)
    aug = RingMap.augmentation(cyclic_group_ring(4))
    assert aug(cyclic_group_ring(4).generator()) == 1
    with pytest.raises(UnsupportedRing):
        RingMap.evaluation(LZ, 2)
    with pytest.raises(RingMismatch):
        RingMap.inclusion(QQ, ZZ)
