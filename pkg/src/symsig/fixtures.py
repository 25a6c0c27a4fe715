"""Canonical fixtures: the interval over Z[t,t^-1] with its two boundary points, the circle,
the 2-disk over Q, the diagonal form and the resulting formation.

Structure matrices were found by searching small entries and are certified by the
validators (see tests/test_fixtures.py).
"""
from __future__ import annotations

from symsig.chain import ChainComplex, ChainMap
from symsig.errors import UnknownFixture
from symsig.forms import EpsForm, Formation, formation_from_automorphism, make_lagrangian
from symsig.linalg import Matrix
from symsig.rings import LQ, LZ, QQ, Laurent
from symsig.structures import (PoincarePair, SymmetricComplex, double, validate_pair,
                               validate_symmetric_complex)

T = Laurent.monomial(1)
T_INV = Laurent.monomial(-1)


def s0_boundary() -> SymmetricComplex:
    """Two points over Z[t,t^-1] with the form diag(1, -1)."""
    C = ChainComplex(LZ, [2], {})
    return SymmetricComplex(C, 0, [{0: Matrix.diagonal(LZ, [1, -1])}])


def d1_pair(end: str = "t") -> PoincarePair:
    """The interval with boundary S^0; the second endpoint is attached by t (or by 1 for 'e')."""
    x = {"t": LZ(T), "e": LZ(1)}.get(end)
    if x is None:
        raise UnknownFixture(f"interval variant {end!r}")
    B = s0_boundary()
    D = ChainComplex(LZ, [2, 1], {1: Matrix.column(LZ, [LZ(-1), x])})
    f = ChainMap(B.complex, D, {0: Matrix.identity(LZ, 2)})
    delta = [{0: Matrix(LZ, [[0], [x]]), 1: Matrix(LZ, [[1, 0]])}, {1: Matrix(LZ, [[1]])}]
    return PoincarePair(B, D, f, delta)


def d1_boundary_automorphism() -> Matrix:
    """A = diag(1, t): pushing the 'e' interval along A (boundary and ambient degree 0)
    gives the 't' interval."""
    return Matrix.diagonal(LZ, [1, T])


def d1_ambient_map() -> ChainMap:
    """The ambient isomorphism e-interval -> t-interval covering the boundary automorphism."""
    Pe, Pt = d1_pair("e"), d1_pair("t")
    return ChainMap(Pe.ambient, Pt.ambient, {0: d1_boundary_automorphism(),
                                              1: Matrix.identity(LZ, 1)})


def circle() -> SymmetricComplex:
    """The circle over Q[t,t^-1]: one 1-cell with boundary (t - 1) times the 0-cell."""
    C = ChainComplex(LQ, [1, 1], {1: Matrix(LQ, [[LQ(T) - LQ(1)]])})
    return SymmetricComplex(C, 1, [{0: Matrix(LQ, [[1]]), 1: Matrix(LQ, [[T_INV]])},
                                   {1: Matrix(LQ, [[-1]])}])


def _rational_circle() -> SymmetricComplex:
    C = ChainComplex(QQ, [1, 1], {})
    return SymmetricComplex(C, 1, [{0: Matrix(QQ, [[1]]), 1: Matrix(QQ, [[1]])}])


def disk2() -> PoincarePair:
    """The 2-disk over Q: cells v, e, f with d f = e, bounded by the circle v, e."""
    B = _rational_circle()
    D = ChainComplex(QQ, [1, 1, 1], {1: Matrix(QQ, [[0]]), 2: Matrix(QQ, [[1]])})
    f = ChainMap(B.complex, D, {0: Matrix.identity(QQ, 1), 1: Matrix.identity(QQ, 1)})
    delta = [{0: Matrix(QQ, [[1]]), 2: Matrix(QQ, [[1]])}]
    return PoincarePair(B, D, f, delta)


def form_diag() -> EpsForm:
    return EpsForm(Matrix.diagonal(LZ, [1, -1]), 1)


def diagonal_lagrangian(F: EpsForm | None = None):
    F = F or form_diag()
    return make_lagrangian(F, Matrix.column(F.ring, [1, 1]))


def cut_circle_formation() -> Formation:
    """(diag(1, -1), Delta, Delta_t) with Delta_t = {(x, t x)}."""
    F = form_diag()
    return formation_from_automorphism(F, diagonal_lagrangian(F), d1_boundary_automorphism())


def doubles() -> dict:
    return {"disk2": double(disk2()), "d1-pair-e": double(d1_pair("e"))}


REGISTRY = {
    "s0-boundary": s0_boundary,
    "d1-pair-t": lambda: d1_pair("t"),
    "d1-pair-e": lambda: d1_pair("e"),
    "circle": circle,
    "disk2": disk2,
    "form-diag-1-minus1": form_diag,
    "formation-paper": cut_circle_formation,
    "doubles": doubles,
}


def fixture(name: str):
    try:
        build = REGISTRY[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
    return build()


def certificate(obj):
    """Validator report for complexes and pairs, None for other objects."""
    if isinstance(obj, SymmetricComplex):
        return validate_symmetric_complex(obj)
    if isinstance(obj, PoincarePair):
        return validate_pair(obj)
    return None
