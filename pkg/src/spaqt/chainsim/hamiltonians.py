"""Spin-1 chain Hamiltonians, local fields, boundary couplings and conserved strings."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..spin import axis_operator, rotation, spin_operators, unit
from ..errors import BadChainLength
from .layout import ChainLayout, OperatorTerm, SpinSite

__all__ = [
    "heisenberg_matrix",
    "haldane_matrix",
    "haldane_hamiltonian",
    "edge_coupled_chain",
    "two_chain_layout",
    "uniform_field_term",
    "coupling_term",
    "ConservedOperator",
    "conserved_operator",
    "string_operator",
    "two_qubit_coupling",
    "xi_state",
    "spin1_sites_before",
]


def heisenberg_matrix(spin_a=1, spin_b=1) -> np.ndarray:
    """S_a . S_b on the product space."""
    A, B = spin_operators(spin_a), spin_operators(spin_b)
    return sum(np.kron(a, b) for a, b in zip(A, B))


def haldane_matrix(J: float = 1.0, beta: float = 0.0) -> np.ndarray:
    """J (S.S - beta (S.S)^2) for two spin-1 sites."""
    h = heisenberg_matrix()
    return J * (h - beta * h @ h)


def _check_beta(beta: float):
    if not -1 < beta < 1:
        warnings.warn(f"beta={beta} lies outside the Haldane range (-1, 1)", stacklevel=3)


def haldane_hamiltonian(N: int, J: float = 1.0, beta: float = 0.0, offset: int = 0,
                        prefix: str = "H") -> list[OperatorTerm]:
    """Nearest-neighbour bilinear-biquadratic terms on spin-1 sites offset .. offset+N-1."""
    if N < 2:
        raise BadChainLength(f"need at least two spin-1 sites, got {N}")
    _check_beta(beta)
    h = haldane_matrix(J, beta)
    return [OperatorTerm((offset + i, offset + i + 1), h, f"{prefix}{i},{i + 1}") for i in range(N - 1)]


def coupling_term(a: int, b: int, spin_a=1, spin_b=1, J: float = 1.0, label: str = "") -> OperatorTerm:
    return OperatorTerm((a, b), J * heisenberg_matrix(spin_a, spin_b), label or f"S{a}.S{b}")


def edge_coupled_chain(N: int, J: float = 1.0, beta: float = 0.0):
    """N spin-1 sites followed by a spin-1/2 coupled to the last of them.

    Returns ``(layout, terms)``; the last term is the edge coupling J S_{N-1}.s.
    """
    if N < 2:
        raise BadChainLength(f"need at least two spin-1 sites, got {N}")
    layout = ChainLayout(tuple(SpinSite.one(f"s{i}") for i in range(N)) + (SpinSite.half("edge"),))
    terms = haldane_hamiltonian(N, J, beta)
    terms.append(coupling_term(N - 1, N, 1, 0.5, J, "edge"))
    return layout, terms


def two_chain_layout(N: int, J: float = 1.0, beta: float = 0.0):
    """Two edge-coupled chains side by side: A0..A{N-1}, a, B0..B{N-1}, b.

    Returns ``(layout, terms)`` for the two static chain Hamiltonians.
    """
    if N < 2:
        raise BadChainLength(f"need at least two spin-1 sites per chain, got {N}")
    sites = tuple(SpinSite.one(f"A{i}") for i in range(N)) + (SpinSite.half("a"),) \
        + tuple(SpinSite.one(f"B{i}") for i in range(N)) + (SpinSite.half("b"),)
    layout = ChainLayout(sites)
    terms = haldane_hamiltonian(N, J, beta, 0, "A") + [coupling_term(N - 1, N, 1, 0.5, J, "edgeA")]
    terms += haldane_hamiltonian(N, J, beta, N + 1, "B") + [coupling_term(2 * N, 2 * N + 1, 1, 0.5, J, "edgeB")]
    return layout, terms


def uniform_field_term(site: int, axis="z", strength: float = 1.0) -> OperatorTerm:
    """strength * (S.m)^2 on a spin-1 site; its unique ground state is |S^m = 0>."""
    Sm = axis_operator(1, axis)
    label = axis if isinstance(axis, str) else "m"
    return OperatorTerm((site,), strength * Sm @ Sm, f"F{site}:{label}")


@dataclass(frozen=True, eq=False)
class ConservedOperator:
    matrix: sp.csr_matrix
    label: str

    def commutator_residual(self, H) -> float:
        C = self.matrix @ H - H @ self.matrix
        C = C.toarray() if sp.issparse(C) else C
        return float(np.max(np.abs(C))) if C.size else 0.0

    def unitarity_residual(self) -> float:
        P = (self.matrix.conj().T @ self.matrix).toarray()
        return float(np.max(np.abs(P - np.eye(P.shape[0]))))

    def __matmul__(self, other: "ConservedOperator") -> "ConservedOperator":
        return ConservedOperator((self.matrix @ other.matrix).tocsr(), f"{self.label}*{other.label}")


def spin1_sites_before(layout: ChainLayout, edge: int, extent: int) -> list[int]:
    """The ``extent`` spin-1 sites immediately to the left of ``edge``."""
    sites = list(range(edge - extent, edge))
    if extent < 0 or (sites and sites[0] < 0) or any(layout.sites[s].dim != 3 for s in sites):
        raise BadChainLength(f"no run of {extent} spin-1 sites ends before site {edge}")
    return sites


def _last_half(layout: ChainLayout) -> int:
    halves = [i for i, s in enumerate(layout.sites) if s.dim == 2]
    if not halves:
        raise BadChainLength("layout has no spin-1/2 site")
    return halves[-1]


def string_operator(layout: ChainLayout, axis, angle: float, extent: int, edge: int | None = None,
                    label: str = "") -> ConservedOperator:
    """Rotation by ``angle`` about ``axis`` of ``extent`` spin-1 sites and the spin-1/2 ``edge``."""
    edge = _last_half(layout) if edge is None else edge
    n = unit(axis)
    factors = {s: rotation(1, n, angle) for s in spin1_sites_before(layout, edge, extent)}
    factors[edge] = rotation(0.5, n, angle)
    return ConservedOperator(layout.product_operator(factors), label or f"R({angle:.4g})")


def conserved_operator(layout: ChainLayout, axis, extent: int, edge: int | None = None) -> ConservedOperator:
    """exp(i pi S^m) on ``extent`` spin-1 sites times exp(i pi/2 sigma^m) on the spin-1/2."""
    name = axis if isinstance(axis, str) else "m"
    return string_operator(layout, axis, np.pi, extent, edge, f"Sigma^{name}_{extent}")


def two_qubit_coupling(J: float = 1.0) -> OperatorTerm:
    """W^AB = [(Sx)^2-(Sy)^2]_A Sz_B + Sz_A [(Sx)^2-(Sy)^2]_B on two spin-1 sites."""
    sx, sy, sz = spin_operators(1)
    q = sx @ sx - sy @ sy
    return OperatorTerm((0, 1), J * (np.kron(q, sz) + np.kron(sz, q)), "W^AB")


def xi_state() -> np.ndarray:
    """(-|1,1> + |1,-1> + |-1,1> + |-1,-1>)/2 in the Sz basis (m = +1, 0, -1 per site)."""
    v = np.zeros(9, dtype=complex)
    idx = {1: 0, -1: 2}
    for (a, b), c in {(1, 1): -1, (1, -1): 1, (-1, 1): 1, (-1, -1): 1}.items():
        v[3 * idx[a] + idx[b]] = c / 2
    return v
