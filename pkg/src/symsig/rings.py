"""Exact rings with involution and the ring maps between them.

Elements are plain immutable Python values: ``int`` for Z, ``Fraction`` for Q,
:class:`Laurent` for Z[t,t^-1] and Q[t,t^-1], :class:`CyclicElement` for group
rings of Z/k.  All supported rings are commutative, so the involution is the
only non-trivial piece of structure a matrix needs beyond ordinary arithmetic.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

from symsig.errors import RingMismatch, UnsupportedRing


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _is_integral(c) -> bool:
    return isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1)


class Laurent:
    """Finite sum of c_k t^k, stored as a sorted tuple of (k, c) with c != 0."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable | dict = ()):
        acc: dict[int, object] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        object.__setattr__(
            self, "terms", tuple(sorted((int(k), c) for k, c in acc.items() if c != 0))
        )

    def __setattr__(self, name, value):
        raise AttributeError("Laurent is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "Laurent":
        return cls(((k, c),))

    @staticmethod
    def _lift(x) -> "Laurent":
        if isinstance(x, Laurent):
            return x
        if isinstance(x, (int, Fraction)):
            return Laurent(((0, x),))
        return NotImplemented

    def __add__(self, other):
        o = Laurent._lift(other)
        if o is NotImplemented:
            return o
        return Laurent(self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other):
        o = Laurent._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = Laurent._lift(other)
        if o is NotImplemented:
            return o
        acc: dict[int, object] = {}
        for a, x in self.terms:
            for b, y in o.terms:
                acc[a + b] = acc.get(a + b, 0) + x * y
        return Laurent(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = Laurent._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if len(self.terms) == 1 and self.terms[0][0] == 0:
            return hash(self.terms[0][1])
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def conj(self) -> "Laurent":
        return Laurent(tuple((-k, c) for k, c in self.terms))

    def evaluate(self, omega):
        total = 0
        for k, c in self.terms:
            total += c * (Fraction(omega) ** k if k < 0 else omega**k)
        return total

    @property
    def low(self) -> int:
        return self.terms[0][0]

    @property
    def high(self) -> int:
        return self.terms[-1][0]

    def span(self) -> int:
        return self.high - self.low if self.terms else -1

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms:
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


class CyclicElement:
    """Element sum_i c_i g^i of the group ring of Z/k (dense coefficient tuple)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicElement is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def _lift(self, x):
        if isinstance(x, CyclicElement):
            if x.order != self.order:
                raise RingMismatch("group orders differ")
            return x
        if isinstance(x, (int, Fraction)):
            return CyclicElement((x,) + (0,) * (self.order - 1))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CyclicElement(a + b for a, b in zip(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return CyclicElement(-a for a in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        k = self.order
        out = [0] * k
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[(i + j) % k] += a * b
        return CyclicElement(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, CyclicElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def conj(self) -> "CyclicElement":
        k = self.order
        return CyclicElement(self.coeffs[(-i) % k] for i in range(k))

    def __repr__(self):
        parts = [f"{c}*g^{i}" if i else f"{c}" for i, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(parts) if parts else "0"


class Ring:
    """A commutative ring with involution.  Subclasses fix the element type."""

    tag: str = "?"
    has_half: bool = False
    euclidean: bool = False
    laurent: bool = False
    base: "Ring | None" = None

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __call__(self, x):
        raise NotImplementedError

    def conj(self, x):
        return x

    def is_zero(self, x) -> bool:
        return x == 0

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    def unit_inverse(self, x):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    # Euclidean structure (only where ``euclidean`` is set)
    def size(self, x) -> int:
        raise UnsupportedRing(f"{self.tag} is not Euclidean")

    def divmod(self, a, b):
        raise UnsupportedRing(f"{self.tag} is not Euclidean")

    def normal_unit(self, x):
        """A unit u such that u*x is the canonical associate of x."""
        raise UnsupportedRing(f"{self.tag} is not Euclidean")

    def encode(self, x):
        raise NotImplementedError

    def decode(self, v):
        raise NotImplementedError

    def random_element(self, rng: random.Random, height: int = 3):
        raise NotImplementedError

    def __repr__(self):
        return self.tag

    def __eq__(self, other):
        return isinstance(other, Ring) and other.tag == self.tag

    def __hash__(self):
        return hash(self.tag)


class IntegerRing(Ring):
    tag = "Z"
    euclidean = True

    def __call__(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        if isinstance(x, Laurent) and (not x.terms or (len(x.terms) == 1 and x.terms[0][0] == 0)):
            return self(x.terms[0][1]) if x.terms else 0
        raise RingMismatch(f"{x!r} is not an integer")

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool)

    def is_unit(self, x):
        return x in (1, -1)

    def unit_inverse(self, x):
        if x not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        return x

    def size(self, x):
        return abs(x)

    def divmod(self, a, b):
        q, r = divmod(a, b)
        if r and 2 * abs(r) > abs(b):
            r -= b
            q += 1
        return q, r

    def normal_unit(self, x):
        return -1 if x < 0 else 1

    def encode(self, x):
        return x

    def decode(self, v):
        if not isinstance(v, int):
            raise RingMismatch(f"bad integer {v!r}")
        return v

    def random_element(self, rng, height=3):
        return rng.randint(-height, height)


class RationalField(Ring):
    tag = "Q"
    has_half = True
    euclidean = True

    def __call__(self, x):
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Fraction(x)
        if isinstance(x, Laurent) and (not x.terms or (len(x.terms) == 1 and x.terms[0][0] == 0)):
            return Fraction(x.terms[0][1]) if x.terms else Fraction(0)
        raise RingMismatch(f"{x!r} is not rational")

    def contains(self, x):
        return isinstance(x, Fraction)

    def is_unit(self, x):
        return x != 0

    def unit_inverse(self, x):
        return 1 / Fraction(x)

    def size(self, x):
        return 0

    def divmod(self, a, b):
        return Fraction(a) / b, Fraction(0)

    def normal_unit(self, x):
        return 1 / Fraction(x) if x != 0 else Fraction(1)

    def encode(self, x):
        return [x.numerator, x.denominator]

    def decode(self, v):
        num, den = v
        f = Fraction(num, den)
        if (f.numerator, f.denominator) != (num, den):
            raise RingMismatch(f"non-canonical fraction {v!r}")
        return f

    def random_element(self, rng, height=3):
        return Fraction(rng.randint(-height, height), rng.choice((1, 1, 1, 2, 3)))


ZZ = IntegerRing()
QQ = RationalField()


class LaurentRing(Ring):
    """Laurent polynomials over Z or Q with involution t -> t^-1."""

    laurent = True

    def __init__(self, base: Ring):
        self.base = base
        self.tag = f"{base.tag}[t,t^-1]"
        self.has_half = base.has_half
        self.euclidean = base.has_half

    def __call__(self, x):
        if isinstance(x, Laurent):
            return Laurent((k, self.base(c)) for k, c in x.terms)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Laurent(((0, self.base(x)),))
        raise RingMismatch(f"{x!r} is not in {self.tag}")

    @property
    def t(self) -> Laurent:
        return Laurent(((1, self.base(1)),))

    def contains(self, x):
        return isinstance(x, Laurent) and all(
            self.base is QQ or _is_integral(c) for _, c in x.terms
        )

    def conj(self, x):
        return x.conj()

    def is_unit(self, x):
        return len(x.terms) == 1 and self.base.is_unit(x.terms[0][1])

    def unit_inverse(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x!r} is not a unit in {self.tag}")
        k, c = x.terms[0]
        return Laurent(((-k, self.base.unit_inverse(c)),))

    def size(self, x):
        if not self.euclidean:
            raise UnsupportedRing(f"{self.tag} is not Euclidean")
        return x.span()

    def divmod(self, a, b):
        if not self.euclidean:
            raise UnsupportedRing(f"{self.tag} is not Euclidean")
        if not b:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not a:
            return Laurent(()), Laurent(())
        shift_a, shift_b = a.low, b.low
        num = [Fraction(0)] * (a.span() + 1)
        for k, c in a.terms:
            num[k - shift_a] = Fraction(c)
        den = [Fraction(0)] * (b.span() + 1)
        for k, c in b.terms:
            den[k - shift_b] = Fraction(c)
        quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        lead = den[-1]
        for i in range(len(num) - len(den), -1, -1):
            coef = num[i + len(den) - 1] / lead
            quot[i] = coef
            if coef:
                for j, d in enumerate(den):
                    num[i + j] -= coef * d
        q = Laurent((i + shift_a - shift_b, c) for i, c in enumerate(quot))
        r = Laurent((i + shift_a, c) for i, c in enumerate(num[: len(den) - 1]))
        return q, r

    def normal_unit(self, x):
        if not x:
            return self.one()
        return Laurent(((-x.low, 1 / Fraction(x.terms[-1][1])),))

    def encode(self, x):
        out = []
        for k, c in x.terms:
            c = Fraction(c)
            out.append([k, c.numerator, c.denominator])
        return out

    def decode(self, v):
        terms = []
        last = None
        for k, num, den in v:
            f = Fraction(num, den)
            if f == 0 or (f.numerator, f.denominator) != (num, den):
                raise RingMismatch(f"non-canonical Laurent term {[k, num, den]!r}")
            if last is not None and k <= last:
                raise RingMismatch("Laurent terms must be strictly increasing")
            if self.base is ZZ and den != 1:
                raise RingMismatch("non-integral coefficient in Z[t,t^-1]")
            last = k
            terms.append((k, self.base(f)))
        return Laurent(terms)

    def random_element(self, rng, height=2):
        width = rng.randint(0, 2)
        low = rng.randint(-1, 1)
        return Laurent(
            (low + i, self.base.random_element(rng, height)) for i in range(width + 1)
        )


LZ = LaurentRing(ZZ)
LQ = LaurentRing(QQ)


class CyclicGroupRing(Ring):
    """Group ring of Z/k over Z or Q, involution g -> g^-1."""

    def __init__(self, k: int, base: Ring = ZZ):
        if k < 1:
            raise ValueError("group order must be positive")
        self.k = k
        self.base = base
        self.tag = f"{base.tag}[Z/{k}]"
        self.has_half = base.has_half

    def __call__(self, x):
        if isinstance(x, CyclicElement):
            if x.order != self.k:
                raise RingMismatch(f"element of Z/{x.order} group ring in {self.tag}")
            return CyclicElement(self.base(c) for c in x.coeffs)
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return CyclicElement((self.base(x),) + (self.base(0),) * (self.k - 1))
        raise RingMismatch(f"{x!r} is not in {self.tag}")

    def generator(self) -> CyclicElement:
        if self.k == 1:
            return self.one()
        return CyclicElement([self.base(0), self.base(1)] + [self.base(0)] * (self.k - 2))

    def contains(self, x):
        return isinstance(x, CyclicElement) and x.order == self.k

    def conj(self, x):
        return x.conj()

    def is_unit(self, x):
        nz = [(i, c) for i, c in enumerate(x.coeffs) if c != 0]
        if len(nz) == 1 and self.base.is_unit(nz[0][1]):
            return True
        if self.base is QQ:
            raise UnsupportedRing(f"unit test for general elements of {self.tag}")
        return False

    def unit_inverse(self, x):
        nz = [(i, c) for i, c in enumerate(x.coeffs) if c != 0]
        if len(nz) != 1 or not self.base.is_unit(nz[0][1]):
            raise UnsupportedRing(f"inverse of non-monomial element in {self.tag}")
        i, c = nz[0]
        out = [self.base(0)] * self.k
        out[(-i) % self.k] = self.base.unit_inverse(c)
        return CyclicElement(out)

    def encode(self, x):
        return [self.base.encode(self.base(c)) for c in x.coeffs]

    def decode(self, v):
        if len(v) != self.k:
            raise RingMismatch(f"expected {self.k} coefficients")
        return CyclicElement(self.base.decode(c) for c in v)

    def random_element(self, rng, height=2):
        return CyclicElement(self.base.random_element(rng, height) for _ in range(self.k))


_GROUP_RINGS: dict[tuple[int, str], CyclicGroupRing] = {}


def cyclic_group_ring(k: int, base: Ring = ZZ) -> CyclicGroupRing:
    key = (k, base.tag)
    if key not in _GROUP_RINGS:
        _GROUP_RINGS[key] = CyclicGroupRing(k, base)
    return _GROUP_RINGS[key]


def ring_from_tag(tag: str) -> Ring:
    fixed = {r.tag: r for r in (ZZ, QQ, LZ, LQ)}
    if tag in fixed:
        return fixed[tag]
    for base in (ZZ, QQ):
        prefix = f"{base.tag}[Z/"
        if tag.startswith(prefix) and tag.endswith("]"):
            try:
                return cyclic_group_ring(int(tag[len(prefix):-1]), base)
            except ValueError:
                break
    raise RingMismatch(f"unknown ring tag {tag!r}")


def encode_element(ring: Ring, x) -> dict:
    return {"ring": ring.tag, "value": ring.encode(ring(x))}


def decode_element(payload: dict):
    ring = ring_from_tag(payload["ring"])
    return ring, ring.decode(payload["value"])


class RingMap:
    """A homomorphism of rings with involution.

    ``kind`` is one of ``identity``, ``inclusion``, ``evaluate`` (t -> omega with
    omega = +1 or -1), ``group_augmentation``.
    """

    def __init__(self, source: Ring, target: Ring, kind: str, omega: int = 1):
        self.source, self.target, self.kind, self.omega = source, target, kind, omega
        if kind == "evaluate":
            if not source.laurent or omega not in (1, -1):
                raise UnsupportedRing("evaluation needs a Laurent source and omega = +-1")
            if target.laurent or not _base_maps_into(source.base, target):
                raise RingMismatch(f"cannot evaluate {source.tag} into {target.tag}")
        elif kind == "inclusion":
            if not _includes(source, target):
                raise RingMismatch(f"no inclusion {source.tag} -> {target.tag}")
        elif kind == "group_augmentation":
            if not isinstance(source, CyclicGroupRing) or not _base_maps_into(source.base, target):
                raise RingMismatch(f"no augmentation {source.tag} -> {target.tag}")
        elif kind == "identity":
            if source != target:
                raise RingMismatch("identity needs equal rings")
        else:
            raise ValueError(f"unknown ring map kind {kind!r}")

    @classmethod
    def augmentation(cls, source: Ring) -> "RingMap":
        if isinstance(source, CyclicGroupRing):
            return cls(source, source.base, "group_augmentation")
        return cls(source, source.base, "evaluate", 1)

    @classmethod
    def evaluation(cls, source: Ring, omega: int, target: Ring | None = None) -> "RingMap":
        return cls(source, target or source.base, "evaluate", omega)

    @classmethod
    def inclusion(cls, source: Ring, target: Ring) -> "RingMap":
        return cls(source, target, "inclusion")

    @classmethod
    def identity(cls, ring: Ring) -> "RingMap":
        return cls(ring, ring, "identity")

    def __call__(self, x):
        if not self.source.contains(x):
            try:
                x = self.source(x)
            except RingMismatch:
                raise RingMismatch(f"{x!r} is not in {self.source.tag}") from None
            if not self.source.contains(x):
                raise RingMismatch(f"{x!r} is not in {self.source.tag}")
        if self.kind == "identity":
            return x
        if self.kind == "inclusion":
            return self.target(x)
        if self.kind == "evaluate":
            return self.target(x.evaluate(self.omega))
        return self.target(sum(x.coeffs))

    def __repr__(self):
        if self.kind == "evaluate":
            return f"RingMap({self.source.tag} -> {self.target.tag}, t -> {self.omega})"
        return f"RingMap({self.source.tag} -> {self.target.tag}, {self.kind})"


def _base_maps_into(base: Ring, target: Ring) -> bool:
    return base == target or (base is ZZ and target is QQ)


def _includes(source: Ring, target: Ring) -> bool:
    if source is ZZ and target is QQ:
        return True
    if source is LZ and target is LQ:
        return True
    if isinstance(source, CyclicGroupRing) and isinstance(target, CyclicGroupRing):
        return source.k == target.k and source.base is ZZ and target.base is QQ
    return False
