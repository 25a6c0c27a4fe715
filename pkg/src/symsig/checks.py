"""Seeded property checks: each returns both sides of a comparison so callers can assert
on the values themselves, not only on the verdict."""
from __future__ import annotations

from symsig.forms import is_trivial_formation, middle_form
from symsig.fixtures import (d1_ambient_map, d1_boundary_automorphism, d1_pair,
                             diagonal_lagrangian, cut_circle_formation)
from symsig.instances import (common_boundary_pairs, equivalent_pair, random_pair,
                              torus_instance)
from symsig.chain import ChainMap
from symsig.sigma import fingerprint, sigma_even, sigma_odd, difference_formation, split_middle
from symsig.structures import glue_pairs, mapping_torus, push_pair


def gluing_formula(seed: int, dim: int) -> dict:
    """sig(P u Q^-) against sig(sigma(P)) - sig(sigma(Q)) for pairs with a common boundary."""
    inst = common_boundary_pairs(seed, dim)
    glued = fingerprint(glue_pairs(inst.P, inst.Q)).signatures[0]
    sp = sigma_even(inst.P).fingerprint.signatures[0]
    sq = sigma_even(inst.Q).fingerprint.signatures[0]
    return {"seed": seed, "dim": dim, "lhs": glued, "rhs": sp - sq, "sigma_P": sp,
            "sigma_Q": sq, "ok": glued == sp - sq}


def homotopy_invariance(seed: int, dim: int) -> dict:
    """Fingerprint of sigma(P) against sigma of P pushed along a random ambient equivalence."""
    P = random_pair(seed, dim)
    P2 = equivalent_pair(P, seed + 1)
    a = sigma_even(P).fingerprint
    b = sigma_even(P2).fingerprint
    return {"seed": seed, "dim": dim, "original": a.to_json(), "equivalent": b.to_json(),
            "ranks": [list(P.ambient.ranks), list(P2.ambient.ranks)], "ok": a == b}


def choice_independence(seed: int, dim: int, variants=(0, 1)) -> dict:
    """sigma(P) computed with two different split witnesses of the boundary."""
    P = random_pair(seed, dim)
    m = dim // 2
    W1, W2 = (split_middle(P.boundary.complex, m, variant=v) for v in variants)
    a, b = sigma_even(P, W1), sigma_even(P, W2)
    return {"seed": seed, "dim": dim, "witnesses": [W1.digest(), W2.digest()],
            "fingerprints": [a.fingerprint.to_json(), b.fingerprint.to_json()],
            "distinct": W1.digest() != W2.digest(), "ok": a.fingerprint == b.fingerprint}


def torus_lemma(seed: int, dim: int = 4) -> dict:
    """sig(P u_1 Q^-) - sig(P u_w Q^-) against sig(T(w))."""
    inst = torus_instance(seed, dim)
    C = inst.P.boundary.complex
    eu = fingerprint(glue_pairs(inst.P, inst.Q, ChainMap.identity(C))).signatures[0]
    ev = fingerprint(glue_pairs(inst.P, inst.Q, inst.w)).signatures[0]
    tw = fingerprint(mapping_torus(inst.P.boundary, inst.w)).signatures[0]
    return {"seed": seed, "kind": inst.kind, "difference": eu - ev, "torus": tw,
            "ok": eu - ev == tw}


def circle_cut_example() -> dict:
    """Both interval signatures, the automorphism relating the pairs, and the formation."""
    Pt, Pe = d1_pair("t"), d1_pair("e")
    F = middle_form(Pt.boundary).form
    K = diagonal_lagrangian(F)
    st, se = sigma_odd(Pt, K), sigma_odd(Pe, K)
    A = d1_boundary_automorphism()
    h = ChainMap(Pe.boundary.complex, Pt.boundary.complex, {0: A})
    related = push_pair(Pe, d1_ambient_map(), h, Pt.inclusion) == Pt
    phi = difference_formation(F, K, A)
    return {"sigma_t": st, "sigma_e": se, "automorphism": A, "related": related,
            "formation": phi, "matches_fixture": phi == cut_circle_formation(),
            "verdict": is_trivial_formation(phi)}
