"""Concrete symmetry groups realised by spin rotations.

* the Klein group of spin-1 pi-rotations about x, y, z (single chain);
* the order-16 group G2 of the two-chain boundary coupling, generated by
  alpha = (sqrt(Rz), Rx) and beta = (Ru, Ru) acting on one spin-1 of each chain.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .groups import FiniteGroup, _parse_word, build_named_group, group_from_elements
from .projrep import ProjectiveRep, pauli_rep
from .spin import pi_rotation, rotation

__all__ = [
    "klein_group",
    "klein_spin1_rep",
    "klein_pauli_rep",
    "g2_generators_spin1",
    "g2_generators_half",
    "g2_group",
    "g2_spin1_rep",
    "g2_half_half_rep",
    "rep_from_words",
]

G2_NAMES = ("α", "β")


def klein_group() -> FiniteGroup:
    return build_named_group("Z2xZ2")


def klein_spin1_rep(G: FiniteGroup | None = None) -> ProjectiveRep:
    """U_m = exp(i pi S^m) on one spin-1 (Sz basis), a linear rep."""
    G = G or klein_group()
    mats = [np.eye(3, dtype=complex) if l == "e" else pi_rotation(1, l) for l in G.labels]
    return ProjectiveRep(G, np.array(mats))


def klein_pauli_rep(G: FiniteGroup | None = None) -> ProjectiveRep:
    return pauli_rep(G or klein_group())


def g2_generators_spin1() -> tuple[np.ndarray, np.ndarray]:
    a = np.kron(rotation(1, "z", np.pi / 2), pi_rotation(1, "x"))
    b = np.kron(pi_rotation(1, "u"), pi_rotation(1, "u"))
    return a, b


def g2_generators_half() -> tuple[np.ndarray, np.ndarray]:
    a = np.kron(rotation(0.5, "z", np.pi / 2), pi_rotation(0.5, "x"))
    b = np.kron(pi_rotation(0.5, "u"), pi_rotation(0.5, "u"))
    return a, b


def _key(m: np.ndarray):
    r = np.round(m, 8) + 0.0  # normalise -0.0
    return r.real.tobytes() + r.imag.tobytes()


@lru_cache(maxsize=1)
def _g2():
    a, b = g2_generators_spin1()
    G, elems = group_from_elements([a, b], lambda x, y: x @ y, _key, np.eye(9, dtype=complex),
                                   names=G2_NAMES, name="G2")
    G.check()
    return G, np.array(elems)


def g2_group() -> FiniteGroup:
    """The group generated by the two boundary-coupling rotations, by closure."""
    return _g2()[0]


def rep_from_words(G: FiniteGroup, names, generators) -> ProjectiveRep:
    """Evaluate each element's label, read as a word in ``names``, on ``generators``.

    Gives a linear rep when the generators satisfy the defining relations,
    and a projective rep when they satisfy them up to phases.
    """
    d = generators[0].shape[0]
    mats = []
    for label in G.labels:
        m = np.eye(d, dtype=complex)
        if label != "e":
            for letter in _parse_word(label, list(names)):
                g = generators[letter // 2]
                m = m @ (g if letter % 2 == 0 else g.conj().T)
        mats.append(m)
    return ProjectiveRep(G, np.array(mats))


def g2_spin1_rep() -> ProjectiveRep:
    G, elems = _g2()
    return ProjectiveRep(G, elems)


def g2_half_half_rep() -> ProjectiveRep:
    """The 1/2 (x) 1/2 projective representation on the two edge spins."""
    return rep_from_words(g2_group(), G2_NAMES, g2_generators_half())
