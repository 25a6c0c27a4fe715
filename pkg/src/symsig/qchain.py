"""Symmetric chains: the complex whose n-cycles are n-dimensional symmetric structures.

A degree-k chain theta on a complex C is a family of matrices
theta[s][r] : C^{k-r+s} -> C_r (s >= 0), i.e. shape rank(r) x rank(k-r+s).
Its boundary is

    (d theta)_s = d theta_s + (-1)^r theta_s d^* + (-1)^{k+s-1} (theta_{s-1} + (-1)^s T theta_{s-1})

with T theta_s : C^{k-r+s} -> C_r equal to (-1)^{r(k-r+s)} (theta_{s, k-r+s})^*.
A symmetric structure of dimension n is a degree-n cycle.
"""
from __future__ import annotations

from typing import Sequence

from symsig.chain import ChainComplex, ChainMap
from symsig.errors import DimensionMismatch
from symsig.linalg import Matrix

QChain = tuple  # tuple over s of dicts r -> Matrix


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def comp(C: ChainComplex, k: int, theta: QChain, s: int, r: int) -> Matrix:
    q = k - r + s
    if 0 <= s < len(theta):
        m = theta[s].get(r)
        if m is not None:
            return m
    return Matrix.zeros(C.ring, C.rank(r), C.rank(q))


def zero(C: ChainComplex, k: int, levels: int) -> QChain:
    return tuple({r: Matrix.zeros(C.ring, C.rank(r), C.rank(k - r + s)) for r in C.degrees()
                  if 0 <= k - r + s <= C.top} for s in range(levels))


def normalize(C: ChainComplex, k: int, theta: Sequence[dict]) -> QChain:
    """Fill in missing components with zeros, check shapes, drop empty levels at the end."""
    out = []
    for s, level in enumerate(theta):
        full = {}
        for r in C.degrees():
            q = k - r + s
            if not 0 <= q <= C.top:
                continue
            m = level.get(r)
            if m is None:
                m = Matrix.zeros(C.ring, C.rank(r), C.rank(q))
            if m.shape != (C.rank(r), C.rank(q)):
                raise DimensionMismatch(
                    f"component s={s}, r={r} has shape {m.shape}, expected {(C.rank(r), C.rank(q))}")
            full[r] = m
        for r, m in level.items():
            if r not in full and (m.nrows * m.ncols) and not m.is_zero():
                raise DimensionMismatch(f"component s={s}, r={r} lies outside the complex")
        out.append(full)
    while out and all(m.is_zero() for m in out[-1].values()):
        out.pop()
    return tuple(out)


def levels(theta: QChain) -> int:
    return len(theta)


def T(C: ChainComplex, k: int, theta: QChain, s: int, r: int) -> Matrix:
    q = k - r + s
    m = comp(C, k, theta, s, q).dagger()
    return m if _sign(r * q) > 0 else -m


def boundary_component(C: ChainComplex, k: int, theta: QChain, s: int, r: int) -> Matrix:
    """Component (s, r) of d theta, a map C^{k-1-r+s} -> C_r."""
    q = k - r + s  # theta_s d^* : C^{q-1} -> C^q -> C_r
    out = C.d(r + 1) @ comp(C, k, theta, s, r + 1)
    t2 = comp(C, k, theta, s, r) @ C.d(q).dagger()
    out = out + t2 if r % 2 == 0 else out - t2
    if s >= 1:
        prev = comp(C, k, theta, s - 1, r)
        tp = T(C, k, theta, s - 1, r)
        inner = prev + tp if s % 2 == 0 else prev - tp
        out = out + inner if _sign(k + s - 1) > 0 else out - inner
    return out


def boundary(C: ChainComplex, k: int, theta: QChain) -> QChain:
    return normalize(C, k - 1, [
        {r: boundary_component(C, k, theta, s, r) for r in C.degrees()
         if 0 <= k - 1 - r + s <= C.top}
        for s in range(len(theta) + 1)])


def add(C: ChainComplex, k: int, a: QChain, b: QChain) -> QChain:
    n = max(len(a), len(b))
    return normalize(C, k, [{r: comp(C, k, a, s, r) + comp(C, k, b, s, r) for r in C.degrees()
                             if 0 <= k - r + s <= C.top} for s in range(n)])


def neg(C: ChainComplex, k: int, a: QChain) -> QChain:
    return tuple({r: -m for r, m in level.items()} for level in a)


def sub(C: ChainComplex, k: int, a: QChain, b: QChain) -> QChain:
    return add(C, k, a, neg(C, k, b))


def push(f: ChainMap, k: int, theta: QChain) -> QChain:
    """f_% theta: components f_r theta_s f_{k-r+s}^*."""
    S, Tc = f.source, f.target
    return normalize(Tc, k, [
        {r: f[r] @ comp(S, k, theta, s, r) @ f[k - r + s].dagger() for r in Tc.degrees()
         if 0 <= k - r + s <= Tc.top}
        for s in range(len(theta))])


def equal(C: ChainComplex, k: int, a: QChain, b: QChain) -> bool:
    n = max(len(a), len(b))
    return all(comp(C, k, a, s, r) == comp(C, k, b, s, r)
               for s in range(n) for r in C.degrees())


def is_zero(theta: QChain) -> bool:
    return all(m.is_zero() for level in theta for m in level.values())


def first_nonzero(theta: QChain):
    for s, level in enumerate(theta):
        for r in sorted(level):
            if not level[r].is_zero():
                return s, r, level[r]
    return None


def to_json(theta: QChain) -> list:
    return [{str(r): m.to_json() for r, m in sorted(level.items())} for level in theta]


def from_json(C: ChainComplex, k: int, payload: list) -> QChain:
    return normalize(C, k, [{int(r): Matrix.from_json(m) for r, m in level.items()}
                            for level in payload])
