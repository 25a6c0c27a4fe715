"""Symmetric complexes, Poincaré pairs, validators, gluing and algebraic mapping tori.

Conventions (all sign choices are enforced by the validators below):

* a symmetric structure of dimension n on C is a degree-n cycle of ``symsig.qchain``;
* phi_0 is a chain map from the signed dual ``dual_complex(C, n, signed=True)`` to C;
* a pair (f: C -> D, (delta, phi)) of dimension n has boundary structure phi of
  dimension n-1 and satisfies  boundary(delta) = (-1)^n f_% phi;
* its relative duality map D^{n-r} -> cone(f)_r = D_r + C_{r-1} is
  (delta_0, (-1)^{n+r} phi_0 f^*), and the pair is Poincaré when that map is an equivalence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from symsig import qchain as Q
from symsig.chain import (ChainComplex, ChainMap, direct_sum_complex, dual_complex,
                          homology, induce, is_acyclic, mapping_cone)
from symsig.errors import (BoundaryMismatch, DimensionMismatch, RingMismatch, StructureMismatch,
                           UnsupportedRing)
from symsig.linalg import Matrix, direct_sum
from symsig.rings import LQ, LZ, RingMap


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _sc(m: Matrix, e: int) -> Matrix:
    return m if e % 2 == 0 else -m


# --------------------------------------------------------------------------
# data


class SymmetricComplex:
    """A chain complex C with an n-dimensional symmetric structure phi (a ``qchain``)."""

    __slots__ = ("complex", "dim", "phi")

    def __init__(self, complex: ChainComplex, dim: int, phi):
        if dim < 0:
            raise DimensionMismatch("negative dimension")
        object.__setattr__(self, "complex", complex)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "phi", Q.normalize(complex, dim, phi))

    def __setattr__(self, name, value):
        raise AttributeError("SymmetricComplex is immutable")

    @property
    def ring(self):
        return self.complex.ring

    def component(self, s: int, r: int) -> Matrix:
        return Q.comp(self.complex, self.dim, self.phi, s, r)

    def duality_map(self) -> ChainMap:
        """phi_0 as a (not necessarily valid) chain map C^{n-*} -> C."""
        C, n = self.complex, self.dim
        Cd = dual_complex(C, n, signed=True)
        return ChainMap(Cd, C, {r: self.component(0, r) for r in range(min(n, C.top) + 1)},
                        check=False)

    def __eq__(self, other):
        if not isinstance(other, SymmetricComplex):
            return NotImplemented
        return (self.dim == other.dim and self.complex == other.complex
                and Q.equal(self.complex, self.dim, self.phi, other.phi))

    __hash__ = None

    def __repr__(self):
        return f"SymmetricComplex(dim={self.dim}, ring={self.ring.tag}, ranks={self.complex.ranks})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "complex": self.complex.to_json(), "phi": Q.to_json(self.phi)}

    @classmethod
    def from_json(cls, payload: dict) -> "SymmetricComplex":
        C = ChainComplex.from_json(payload["complex"])
        n = int(payload["dim"])
        return cls(C, n, Q.from_json(C, n, payload["phi"]))


SymmetricStructure = SymmetricComplex


class PoincarePair:
    """(f: C -> D, (delta, phi)) of dimension n = boundary.dim + 1."""

    __slots__ = ("boundary", "ambient", "inclusion", "delta")

    def __init__(self, boundary: SymmetricComplex, ambient: ChainComplex, inclusion: ChainMap,
                 delta):
        if inclusion.source != boundary.complex or inclusion.target != ambient:
            raise DimensionMismatch("inclusion must map the boundary complex to the ambient complex")
        if ambient.ring != boundary.ring:
            raise RingMismatch("boundary and ambient over different rings")
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "inclusion", inclusion)
        object.__setattr__(self, "delta", Q.normalize(ambient, boundary.dim + 1, delta))

    def __setattr__(self, name, value):
        raise AttributeError("PoincarePair is immutable")

    @property
    def dim(self) -> int:
        return self.boundary.dim + 1

    @property
    def ring(self):
        return self.ambient.ring

    def component(self, s: int, r: int) -> Matrix:
        return Q.comp(self.ambient, self.dim, self.delta, s, r)

    def duality_map(self) -> ChainMap:
        """The relative duality map D^{n-*} -> cone(f) (not checked)."""
        D, f, n = self.ambient, self.inclusion, self.dim
        C = f.source
        cone = mapping_cone(f)
        Dd = dual_complex(D, n, signed=True)
        maps = {}
        for r in range(n + 1):
            top = self.component(0, r)
            if r >= 1:
                low = _sc(self.boundary.component(0, r - 1) @ f[n - r].dagger(), n + r)
            else:
                low = Matrix.zeros(self.ring, 0, D.rank(n - r))
            maps[r] = Matrix.block(self.ring, [[top], [low]], [D.rank(r), C.rank(r - 1)],
                                   [D.rank(n - r)])
        return ChainMap(Dd, cone, {r: m for r, m in maps.items() if r <= max(cone.top, Dd.top)},
                        check=False)

    @classmethod
    def closed(cls, X: SymmetricComplex) -> "PoincarePair":
        """A closed complex viewed as a pair with empty boundary."""
        B = SymmetricComplex(ChainComplex.zero(X.ring), X.dim - 1, ()) if X.dim >= 1 else None
        if B is None:
            raise DimensionMismatch("a 0-dimensional complex has no pair structure")
        return cls(B, X.complex, ChainMap.zero(B.complex, X.complex), X.phi)

    def __eq__(self, other):
        if not isinstance(other, PoincarePair):
            return NotImplemented
        return (self.boundary == other.boundary and self.ambient == other.ambient
                and self.inclusion == other.inclusion
                and Q.equal(self.ambient, self.dim, self.delta, other.delta))

    __hash__ = None

    def __repr__(self):
        return (f"PoincarePair(dim={self.dim}, ring={self.ring.tag}, "
                f"boundary={self.boundary.complex.ranks}, ambient={self.ambient.ranks})")

    def to_json(self) -> dict:
        return {"dim": self.dim, "boundary": self.boundary.to_json(),
                "ambient": self.ambient.to_json(),
                "inclusion": [self.inclusion[i].to_json()
                              for i in range(max(self.ambient.top, self.boundary.complex.top) + 1)],
                "delta": Q.to_json(self.delta)}

    @classmethod
    def from_json(cls, payload: dict) -> "PoincarePair":
        B = SymmetricComplex.from_json(payload["boundary"])
        D = ChainComplex.from_json(payload["ambient"])
        f = ChainMap(B.complex, D, {i: Matrix.from_json(m) for i, m in enumerate(payload["inclusion"])},
                     check=False)
        return cls(B, D, f, Q.from_json(D, B.dim + 1, payload["delta"]))


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    """One invariant: passed is True, False, or None when undecidable over the ring."""
    check: str
    passed: bool | None
    degree: int | None = None
    residual: Matrix | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "degree": self.degree, "pass": self.passed,
                "residual": None if self.residual is None else self.residual.to_json(),
                "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed is True for c in self.checks)

    @property
    def failed(self) -> bool:
        return any(c.passed is False for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.passed is False]

    @property
    def first_failure(self) -> Check | None:
        f = self.failures
        return f[0] if f else None

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.check == name:
                return c
        raise KeyError(name)

    def to_json(self) -> list:
        return [c.to_json() for c in self.checks]

    def text(self) -> str:
        lines = []
        for c in self.checks:
            status = {True: "pass", False: "FAIL", None: "undecided"}[c.passed]
            where = "" if c.degree is None else f" (degree {c.degree})"
            extra = f": {c.detail}" if c.detail else ""
            lines.append(f"{status:9s} {c.check}{where}{extra}")
        return "\n".join(lines)


def _check_complex(name: str, C: ChainComplex) -> Check:
    for i in range(2, C.top + 1):
        m = C.d(i - 1) @ C.d(i)
        if not m.is_zero():
            return Check(name, False, i, m, f"d_{i - 1} d_{i} != 0")
    return Check(name, True)


def _check_chain_map(name: str, f: ChainMap) -> Check:
    for i in range(1, max(f.source.top, f.target.top) + 1):
        m = f[i - 1] @ f.source.d(i) - f.target.d(i) @ f[i]
        if not m.is_zero():
            return Check(name, False, i, m, f"square fails between degrees {i} and {i - 1}")
    return Check(name, True)


def _first_bad_component(C: ChainComplex, k: int, theta) -> tuple[int, int, Matrix] | None:
    """Smallest degree r (then smallest s) with a nonzero component."""
    best = None
    for s, level in enumerate(theta):
        for r, m in level.items():
            if not m.is_zero() and (best is None or (r, s) < (best[1], best[0])):
                best = (s, r, m)
    return best


def _check_qchain_zero(name: str, C: ChainComplex, k: int, theta, what: str) -> Check:
    bad = _first_bad_component(C, k, theta)
    if bad is None:
        return Check(name, True)
    s, r, m = bad
    return Check(name, False, r, m, f"{what}: component s={s} nonzero in degree {r}")


def _first_homology_degree(C: ChainComplex) -> int | None:
    """First degree with nonzero homology, or None if not decidable here."""
    ring = C.ring
    R = C
    if ring is LZ:
        R = induce(C, RingMap.inclusion(LZ, LQ))
    if not R.ring.euclidean:
        return None
    for i in R.degrees():
        if not homology(R, i).is_zero():
            return i
    return None


def _check_equivalence(name: str, f: ChainMap) -> Check:
    cone = mapping_cone(f)
    try:
        ok = is_acyclic(cone)
    except UnsupportedRing as exc:
        return Check(name, None, None, None, str(exc))
    if ok:
        return Check(name, True)
    deg = _first_homology_degree(cone)
    # degree r of the cone corresponds to degree r-1 of the duality map's failure
    return Check(name, False, None if deg is None else max(deg - 1, 0), None,
                 "duality map is not a chain equivalence"
                 + ("" if deg is None else f" (cone homology in degree {deg})"))


def validate_symmetric_complex(X: SymmetricComplex, poincare: bool = True) -> ValidationReport:
    """Check d^2 = 0, the symmetric cycle relation, phi_0 chain map and (optionally) duality."""
    C, n = X.complex, X.dim
    checks = [_check_complex("complex", C)]
    if C.trimmed().top > n:
        checks.append(Check("dimension", False, C.trimmed().top, None,
                            f"complex has modules above dimension {n}"))
        return ValidationReport(tuple(checks))
    checks.append(Check("dimension", True))
    if checks[0].passed is False:
        return ValidationReport(tuple(checks))
    checks.append(_check_qchain_zero("symmetric relation", C, n - 1, Q.boundary(C, n, X.phi),
                                     "boundary of phi"))
    phi0 = X.duality_map()
    checks.append(_check_chain_map("duality chain map", phi0))
    if poincare:
        if checks[-1].passed is False:
            checks.append(Check("duality equivalence", False, checks[-1].degree, None,
                                "phi_0 is not a chain map"))
        else:
            checks.append(_check_equivalence("duality equivalence", phi0))
    return ValidationReport(tuple(checks))


def validate_pair(P: PoincarePair, poincare: bool = True) -> ValidationReport:
    """Checks for the ambient and boundary complexes, the inclusion, both structures and duality."""
    D, f, n = P.ambient, P.inclusion, P.dim
    C = f.source
    checks = [_check_complex("ambient complex", D), _check_complex("boundary complex", C)]
    if D.trimmed().top > n or C.trimmed().top > n - 1:
        checks.append(Check("dimension", False, max(D.trimmed().top, C.trimmed().top + 1), None,
                            "modules above the pair dimension"))
        return ValidationReport(tuple(checks))
    checks.append(Check("dimension", True))
    checks.append(_check_chain_map("inclusion chain map", f))
    if any(c.passed is False for c in checks):
        return ValidationReport(tuple(checks))
    checks.append(_check_qchain_zero("boundary symmetric relation", C, n - 2,
                                     Q.boundary(C, n - 1, P.boundary.phi), "boundary of phi"))
    rel = Q.sub(D, n - 1, Q.boundary(D, n, P.delta), _signed_push(f, n - 1, P.boundary.phi, n))
    checks.append(_check_qchain_zero("pair relation", D, n - 1, rel,
                                     "boundary of delta minus (-1)^n f_% phi"))
    dmap = P.duality_map()
    checks.append(_check_chain_map("relative duality chain map", dmap))
    if poincare:
        bphi = P.boundary.duality_map() if n >= 1 else None
        if bphi is not None and C.total_rank():
            checks.append(_check_equivalence("boundary duality equivalence", bphi))
        else:
            checks.append(Check("boundary duality equivalence", True))
        if checks[-2].passed is False:
            checks.append(Check("relative duality equivalence", False, checks[-2].degree, None,
                                "relative duality map is not a chain map"))
        else:
            checks.append(_check_equivalence("relative duality equivalence", dmap))
    return ValidationReport(tuple(checks))


def _signed_push(f: ChainMap, k: int, theta, e: int):
    pushed = Q.push(f, k, theta)
    return pushed if e % 2 == 0 else Q.neg(f.target, k, pushed)


def is_poincare(X: SymmetricComplex) -> bool:
    return validate_symmetric_complex(X).ok


def certify(X: SymmetricComplex) -> SymmetricComplex:
    """Return X if it validates as a Poincaré complex, otherwise raise StructureMismatch."""
    rep = validate_symmetric_complex(X)
    if not rep.ok:
        bad = next(c for c in rep.checks if c.passed is not True)
        raise StructureMismatch(f"{bad.check} failed"
                                + ("" if bad.degree is None else f" in degree {bad.degree}"))
    return X


def certify_pair(P: PoincarePair) -> PoincarePair:
    rep = validate_pair(P)
    if not rep.ok:
        bad = next(c for c in rep.checks if c.passed is not True)
        raise StructureMismatch(f"{bad.check} failed"
                                + ("" if bad.degree is None else f" in degree {bad.degree}"))
    return P


# --------------------------------------------------------------------------
# elementary constructions


def negate(X):
    """Orientation reversal: all structure components negated."""
    if isinstance(X, PoincarePair):
        return PoincarePair(negate(X.boundary), X.ambient, X.inclusion,
                            Q.neg(X.ambient, X.dim, X.delta))
    return SymmetricComplex(X.complex, X.dim, Q.neg(X.complex, X.dim, X.phi))


def _block_diag_qchain(parts, k: int):
    """Direct sum of qchains on the direct sum complex."""
    levels = max((len(th) for _, th in parts), default=0)
    C = direct_sum_complex(*(c for c, _ in parts)) if parts else None
    out = []
    for s in range(levels):
        lev = {}
        for r in C.degrees():
            q = k - r + s
            if not 0 <= q <= C.top:
                continue
            lev[r] = direct_sum(*(Q.comp(c, k, th, s, r) for c, th in parts))
        out.append(lev)
    return C, Q.normalize(C, k, out)


def direct_sum_structures(*xs: SymmetricComplex) -> SymmetricComplex:
    n = xs[0].dim
    if any(x.dim != n for x in xs):
        raise DimensionMismatch("direct sum of structures of different dimensions")
    top = max(max(x.complex.top for x in xs), 0)
    parts = [(x.complex.padded(top), x.phi) for x in xs]
    C, phi = _block_diag_qchain(parts, n)
    return SymmetricComplex(C, n, phi)


def direct_sum_pairs(*ps: PoincarePair) -> PoincarePair:
    n = ps[0].dim
    if any(p.dim != n for p in ps):
        raise DimensionMismatch("direct sum of pairs of different dimensions")
    B = direct_sum_structures(*(p.boundary for p in ps))
    top = max(p.ambient.top for p in ps)
    D, delta = _block_diag_qchain([(p.ambient.padded(top), p.delta) for p in ps], n)
    ftop = max(D.top, B.complex.top)
    f = ChainMap(B.complex, D, {i: direct_sum(*(p.inclusion[i] for p in ps)) for i in range(ftop + 1)
                                if i <= D.top and i <= B.complex.top}, check=False)
    return PoincarePair(B, D, f, delta)


def push_structure(f: ChainMap, X: SymmetricComplex) -> SymmetricComplex:
    """f_% phi on the target of f."""
    if f.source != X.complex:
        raise DimensionMismatch("map does not start at the structure's complex")
    return SymmetricComplex(f.target, X.dim, Q.push(f, X.dim, X.phi))


def push_pair(P: PoincarePair, g: ChainMap, h: ChainMap | None = None,
              inclusion: ChainMap | None = None) -> PoincarePair:
    """Push a pair along an ambient map g: D -> D' (and a boundary map h: C -> C').

    Without h the boundary is kept and the new inclusion is g f. With h the new
    inclusion f' must be given and satisfy g f = f' h.
    """
    if g.source != P.ambient:
        raise DimensionMismatch("ambient map does not start at the pair's ambient complex")
    if h is None:
        B = P.boundary
        gf = g @ P.inclusion
        top = max(B.complex.top, g.target.top)
        f_new = ChainMap(B.complex, g.target, {i: gf[i] for i in range(top + 1)}, check=False)
    else:
        if inclusion is None:
            raise DimensionMismatch("pushing the boundary needs the new inclusion")
        B = push_structure(h, P.boundary)
        f_new = inclusion
        top = max(P.boundary.complex.top, g.target.top)
        for i in range(top + 1):
            if g[i] @ P.inclusion[i] != f_new[i] @ h[i]:
                raise StructureMismatch(f"g f != f' h in degree {i}")
    return PoincarePair(B, g.target, f_new, Q.push(g, P.dim, P.delta))


# --------------------------------------------------------------------------
# union (gluing) of two pairs with the same boundary


def union_complex(f: ChainMap, g: ChainMap) -> ChainComplex:
    """E_r = D_r + C_{r-1} + D'_r for f: C -> D, g: C -> D'."""
    C, D, D2 = f.source, f.target, g.target
    if g.source != C:
        raise DimensionMismatch("union of maps with different sources")
    ring = C.ring
    top = max(D.top, D2.top, C.top + 1)
    ranks = [D.rank(r) + C.rank(r - 1) + D2.rank(r) for r in range(top + 1)]
    diffs = {}
    for r in range(1, top + 1):
        e = r - 1
        diffs[r] = Matrix.block(
            ring,
            [[D.d(r), _sc(f[r - 1], e), None],
             [None, C.d(r - 1), None],
             [None, _sc(g[r - 1], e), D2.d(r)]],
            [D.rank(r - 1), C.rank(r - 2), D2.rank(r - 1)],
            [D.rank(r), C.rank(r - 1), D2.rank(r)])
    return ChainComplex(ring, ranks, diffs, check=False)


def union_structure(E: ChainComplex, n: int, f: ChainMap, g: ChainMap, delta, phi, delta2):
    """Symmetric structure on D u_C D' for relation-compatible (delta, phi) and (delta2, phi).

    Blocks of nu_s : E^{n-r+s} -> E_r, rows and columns ordered (D, C, D'):
        [[ delta_s,                      0,                           0        ],
         [ (-1)^{n+r} phi_s f^*,         (-1)^{n+r+s} T phi_{s-1},    0        ],
         [ 0,                            (-1)^{s+1} g phi_s,          -delta2_s]]
    """
    C, D, D2 = f.source, f.target, g.target
    ring = C.ring
    k = n - 1
    levels = max(len(delta), len(phi) + 1, len(delta2))
    out = []
    for s in range(levels):
        lev = {}
        for r in E.degrees():
            q = n - r + s
            if not 0 <= q <= E.top:
                continue
            b21 = _sc(Q.comp(C, k, phi, s, r - 1) @ f[q].dagger(), n + r) if r >= 1 else None
            b22 = _sc(Q.T(C, k, phi, s - 1, r - 1), n + r + s) if s >= 1 and r >= 1 else None
            b32 = _sc(g[r] @ Q.comp(C, k, phi, s, r), s + 1) if q >= 1 else None
            lev[r] = Matrix.block(
                ring,
                [[Q.comp(D, n, delta, s, r), None, None],
                 [b21, b22, None],
                 [None, b32, -Q.comp(D2, n, delta2, s, r)]],
                [D.rank(r), C.rank(r - 1), D2.rank(r)],
                [D.rank(q), C.rank(q - 1), D2.rank(q)])
        out.append(lev)
    return Q.normalize(E, n, out)


def union(P: PoincarePair, P2: PoincarePair) -> SymmetricComplex:
    """P u P2^- for two pairs with literally equal boundary structures."""
    if P.dim != P2.dim:
        raise DimensionMismatch("pairs of different dimensions")
    if P.boundary != P2.boundary:
        raise BoundaryMismatch("pairs do not share the same boundary structure")
    E = union_complex(P.inclusion, P2.inclusion)
    nu = union_structure(E, P.dim, P.inclusion, P2.inclusion, P.delta, P.boundary.phi, P2.delta)
    return SymmetricComplex(E, P.dim, nu)


def transport_difference(u: ChainMap, phi_src: SymmetricComplex, psi: SymmetricComplex):
    """chi with boundary(chi) = u_% phi - psi, or None if no such chain is found.

    Exact equality gives chi = 0. Otherwise a linear solve is attempted over rings
    with trivial involution and Euclidean division.
    """
    k = phi_src.dim
    D = u.target
    diff = Q.sub(D, k, Q.push(u, k, phi_src.phi), psi.phi)
    if Q.is_zero(diff):
        return ()
    ring = D.ring
    if not ring.euclidean or ring.laurent or not _trivial_involution(ring):
        return None
    return _solve_qchain_boundary(D, k + 1, diff)


def _trivial_involution(ring) -> bool:
    return ring.tag in ("Z", "Q")


def _solve_qchain_boundary(D: ChainComplex, k: int, target):
    """Find chi of degree k with boundary(chi) = target (trivial involution rings only)."""
    from symsig.linalg import solve_linear
    levels = len(target) + 1
    # unknown slots
    slots = []
    for s in range(levels):
        for r in D.degrees():
            q = k - r + s
            if 0 <= q <= D.top and D.rank(r) * D.rank(q):
                slots.append((s, r, D.rank(r), D.rank(q)))
    nunk = sum(a * b for _, _, a, b in slots)
    if nunk == 0:
        return None
    ring = D.ring
    # boundary is linear: build columns by unit chains
    cols = []
    keys = None
    for s, r, a, b in slots:
        for i in range(a):
            for j in range(b):
                rows = [[ring.zero()] * b for _ in range(a)]
                rows[i][j] = ring.one()
                unit = [dict() for _ in range(levels)]
                unit[s][r] = Matrix._raw(ring, rows, a, b)
                img = Q.boundary(D, k, Q.normalize(D, k, unit))
                vec, keys = _flatten(D, k - 1, img, levels + 1, keys)
                cols.append(vec)
    tvec, _ = _flatten(D, k - 1, target, levels + 1, keys)
    A = Matrix._raw(ring, [list(row) for row in zip(*cols)], len(tvec), len(cols))
    b = Matrix._raw(ring, [[x] for x in tvec], len(tvec), 1)
    x = solve_linear(A, b)
    if x is None:
        return None
    out = [dict() for _ in range(levels)]
    pos = 0
    for s, r, a, bb in slots:
        flat = [x[pos + t, 0] for t in range(a * bb)]
        pos += a * bb
        out[s][r] = Matrix._raw(ring, [flat[i * bb:(i + 1) * bb] for i in range(a)], a, bb)
    return Q.normalize(D, k, out)


def _flatten(D: ChainComplex, k: int, theta, levels: int, keys):
    if keys is None:
        keys = [(s, r) for s in range(levels) for r in D.degrees() if 0 <= k - r + s <= D.top]
    vec = []
    for s, r in keys:
        m = Q.comp(D, k, theta, s, r)
        for row in m.rows:
            vec.extend(row)
    return vec, keys


def glue_pairs(P: PoincarePair, P2: PoincarePair, u: ChainMap | None = None,
               check: bool = True) -> SymmetricComplex:
    """Glue P and P2 along an equivalence u from P's boundary to P2's boundary.

    The result is P u_u P2^- on E_r = D_r + C_{r-1} + D'_r. The boundary structures
    must agree after transport along u, exactly or up to a boundary that can be solved for.
    """
    from symsig.chain import is_equivalence
    if P.dim != P2.dim:
        raise DimensionMismatch("pairs of different dimensions")
    C, C2 = P.boundary.complex, P2.boundary.complex
    if u is None:
        if C != C2:
            raise BoundaryMismatch("boundary complexes differ and no identification was given")
        u = ChainMap.identity(C)
    if u.source != C or u.target != C2:
        raise BoundaryMismatch("u must map the first boundary complex to the second")
    if check and (C.total_rank() or C2.total_rank()):
        try:
            eq = is_equivalence(u)
        except UnsupportedRing:
            eq = None
        if eq is False:
            raise BoundaryMismatch("u is not a chain equivalence")
    n = P.dim
    chi = transport_difference(u, P.boundary, P2.boundary)
    if chi is None:
        raise BoundaryMismatch("u does not carry the first boundary structure to the second")
    g = P2.inclusion @ u
    g = ChainMap(C, P2.ambient, {i: g[i] for i in range(max(C.top, P2.ambient.top) + 1)},
                 check=False)
    delta2 = P2.delta
    if chi:
        delta2 = Q.add(P2.ambient, n, delta2, _signed_push(P2.inclusion, n, chi, n))
    E = union_complex(P.inclusion, g)
    nu = union_structure(E, n, P.inclusion, g, P.delta, P.boundary.phi, delta2)
    X = SymmetricComplex(E, n, nu)
    if check:
        rep = validate_symmetric_complex(X, poincare=False)
        if not rep.ok:
            raise StructureMismatch(f"glued structure failed: {rep.first_failure.check}")
    return X


def double(P: PoincarePair) -> SymmetricComplex:
    """The algebraic double P u P^-."""
    return glue_pairs(P, P)


# --------------------------------------------------------------------------
# boundary and thickening of a symmetric complex


def boundary_of(X: SymmetricComplex) -> SymmetricComplex:
    """The (n-1)-dimensional Poincaré boundary of an n-dimensional symmetric complex.

    Requires C_0 = C_n = 0 so that the boundary lives in degrees 0..n-1:
    (dC)_r = C_{r+1} + C^{n-r}, differential [[d, (-1)^r phi_0], [0, (-1)^r d^*]].
    """
    C, n, phi = X.complex, X.dim, X.phi
    if n < 1 or C.rank(0) or C.rank(n) or C.trimmed().top > n:
        raise DimensionMismatch("boundary construction needs C_0 = C_n = 0 and top degree <= n")
    ring = C.ring
    ranks = [C.rank(r + 1) + C.rank(n - r) for r in range(n)]
    diffs = {}
    for r in range(1, n):
        diffs[r] = Matrix.block(
            ring,
            [[C.d(r + 1), _sc(X.component(0, r), r)],
             [None, _sc(C.d(n - r + 1).dagger(), r)]],
            [C.rank(r), C.rank(n - r + 1)], [C.rank(r + 1), C.rank(n - r)])
    B = ChainComplex(ring, ranks, diffs, check=False)
    k = n - 1
    out = []
    for s in range(max(len(phi), 1)):
        lev = {}
        for r in range(n):
            q = k - r + s
            if not 0 <= q <= n - 1:
                continue
            corner = _sc(Q.comp(C, n, phi, s + 1, r + 1), r + s)
            if s == 0:
                blocks = [[corner, _sc(Matrix.identity(ring, C.rank(r + 1)), (r + 1) * (n - r))],
                          [_sc(Matrix.identity(ring, C.rank(n - r)), n), None]]
            else:
                blocks = [[corner, None], [None, None]]
            lev[r] = Matrix.block(ring, blocks, [C.rank(r + 1), C.rank(n - r)],
                                  [C.rank(q + 1), C.rank(n - q)])
        out.append(lev)
    return SymmetricComplex(B, k, out)


def thickening(X: SymmetricComplex) -> PoincarePair:
    """The n-dimensional Poincaré pair (dC -> C^{n-*}, (0, d phi)) of a symmetric complex."""
    B = boundary_of(X)
    C, n = X.complex, X.dim
    Cd = dual_complex(C, n, signed=True)
    ring = C.ring
    maps = {r: Matrix.block(ring, [[None, Matrix.identity(ring, C.rank(n - r))]],
                            [C.rank(n - r)], [C.rank(r + 1), C.rank(n - r)])
            for r in range(n)}
    f = ChainMap(B.complex, Cd, maps, check=False)
    return PoincarePair(B, Cd, f, ())


# --------------------------------------------------------------------------
# mapping torus


def cylinder_pair(X: SymmetricComplex, w: ChainMap | None = None) -> PoincarePair:
    """(C + C -> C, (0, phi + (-phi))) with inclusion (1, w); needs w_% phi = phi."""
    C = X.complex
    w = ChainMap.identity(C) if w is None else w
    B = direct_sum_structures(X, negate(X))
    maps = {i: Matrix.hstack(Matrix.identity(C.ring, C.rank(i)), w[i]) for i in C.degrees()}
    f = ChainMap(B.complex, C, maps, check=False)
    return PoincarePair(B, C, f, ())


def mapping_torus(X: SymmetricComplex, w: ChainMap, check: bool = True) -> SymmetricComplex:
    """Algebraic mapping torus T(w) of a structure-preserving self map w (w_% phi = phi).

    Built by gluing the cylinders on (1, 1) and (1, w) and pushing the result to
    cone(1 - w) along the equivalence (a, b1, b2, c) -> (a - c, b2).
    """
    C, k = X.complex, X.dim
    if w.source != C or w.target != C:
        raise StructureMismatch("w must be a self map of the structure's complex")
    if not Q.equal(C, k, Q.push(w, k, X.phi), X.phi):
        raise StructureMismatch("w does not preserve the symmetric structure")
    Y = union(cylinder_pair(X), cylinder_pair(X, w))
    E = Y.complex
    ring = C.ring
    one_minus_w = ChainMap.identity(C) - w
    T = mapping_cone(one_minus_w)
    maps = {}
    for r in T.degrees():
        I_r = Matrix.identity(ring, C.rank(r))
        I_r1 = Matrix.identity(ring, C.rank(r - 1))
        maps[r] = Matrix.block(ring, [[I_r, None, None, -I_r], [None, None, I_r1, None]],
                               [C.rank(r), C.rank(r - 1)],
                               [C.rank(r), C.rank(r - 1), C.rank(r - 1), C.rank(r)])
    p = ChainMap(E, T, maps, check=check)
    out = SymmetricComplex(T, k + 1, Q.push(p, k + 1, Y.phi))
    if check:
        rep = validate_symmetric_complex(out, poincare=False)
        if not rep.ok:
            raise StructureMismatch(f"torus structure failed: {rep.first_failure.check}")
    return out


def induce_structure(X: SymmetricComplex, beta) -> SymmetricComplex:
    """Base change of a symmetric complex along a ring map commuting with the involutions."""
    C = induce(X.complex, beta)
    return SymmetricComplex(C, X.dim, [{r: m.map(beta, beta.target) for r, m in level.items()}
                                       for level in X.phi])
