import pytest

from symsig import serial
from symsig.chain import ChainMap
from symsig.errors import ParseError, UnknownFixture
from symsig.fixtures import (REGISTRY, certificate, d1_ambient_map, d1_boundary_automorphism,
                             d1_pair, fixture)
from symsig.forms import is_lagrangian, middle_form
from symsig.linalg import Matrix
from symsig.rings import LZ, Laurent
from symsig.structures import push_pair

T = Laurent.monomial(1)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_every_fixture_builds_and_certifies(name):
    obj = fixture(name)
    items = obj.values() if isinstance(obj, dict) else [obj]
    for item in items:
        rep = certificate(item)
        assert rep is None or rep.ok, rep.text()


@pytest.mark.parametrize("name", sorted(n for n in REGISTRY if n != "doubles"))
def test_fixture_serial_roundtrip(name):
    obj = fixture(name)
    again = serial.loads(serial.dumps(obj))
    assert again == obj
    assert serial.dumps(again) == serial.dumps(obj)


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        fixture("d2-pair")
    with pytest.raises(UnknownFixture):
        d1_pair("x")


def test_interval_differentials():
    assert d1_pair("t").ambient.d(1) == Matrix.column(LZ, [-1, T])
    assert d1_pair("e").ambient.d(1) == Matrix.column(LZ, [-1, 1])


def test_intervals_are_related_by_the_automorphism():
    Pe, Pt = d1_pair("e"), d1_pair("t")
    A = d1_boundary_automorphism()
    assert A == Matrix(LZ, [[1, 0], [0, T]])
    h = ChainMap(Pe.boundary.complex, Pt.boundary.complex, {0: A})
    assert push_pair(Pe, d1_ambient_map(), h, Pt.inclusion) == Pt


def test_boundary_form_and_diagonal():
    mf = middle_form(d1_pair("t").boundary)
    assert mf.form.matrix == Matrix.diagonal(LZ, [1, -1])
    assert is_lagrangian(mf.form, Matrix.column(LZ, [1, 1]))


def test_formation_fixture_entries():
    phi = fixture("formation-paper")
    assert phi.form.matrix == Matrix.diagonal(LZ, [1, -1])
    assert phi.K.j == Matrix.column(LZ, [1, 1])
    assert phi.L.j == Matrix.column(LZ, [1, T])


def test_serial_rejects_garbage():
    with pytest.raises(ParseError):
        serial.loads("{not json")
    with pytest.raises(ParseError):
        serial.load({"kind": "complex"})
    with pytest.raises(ParseError):
        serial.load({"kind": "mystery", "data": {}})
    with pytest.raises(ParseError):
        serial.load({"kind": "matrix", "data": {"ring": "Z", "rows": [[1, 2], [3]]}})
