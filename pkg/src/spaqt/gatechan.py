"""Twisted group-averaging channels and their unitary fixed points (elementary gates)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFixedSpace, DimensionMismatch, NonUnitaryFixedPoint
from .groups import Character, characters
from .projrep import ProjectiveRep, is_irreducible

__all__ = [
    "superoperator",
    "apply_gamma",
    "fixed_space_dimension",
    "fixed_point",
    "fix_phase",
    "GateTable",
    "gate_table",
    "ProjectorAlgebraReport",
    "check_projector_algebra",
    "intertwining_residual",
    "gate_table_to_json",
    "complex_to_pairs",
]

UNITARITY_TOL = 1e-9


def superoperator(rep: ProjectiveRep, chi: Character) -> np.ndarray:
    """Matrix of M -> (1/|G|) sum_g chi(g) V_g M V_g^dagger on row-major vec(M)."""
    V = rep.matrices
    d = rep.dim
    S = np.einsum("g,gij,gkl->ikjl", chi.values, V, V.conj()).reshape(d * d, d * d)
    return S / rep.group.order


def apply_gamma(rep: ProjectiveRep, chi: Character, M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.shape != (rep.dim, rep.dim):
        raise DimensionMismatch(f"matrix shape {M.shape} but representation dimension {rep.dim}")
    V = rep.matrices
    out = np.einsum("g,gij,jk,glk->il", chi.values, V, M, V.conj())
    return out / rep.group.order


def _unit_eigvecs(rep: ProjectiveRep, chi: Character) -> np.ndarray:
    # The channel is an orthogonal projector, hence Hermitian with spectrum {0, 1}.
    S = superoperator(rep, chi)
    w, v = np.linalg.eigh((S + S.conj().T) / 2)
    return v[:, w > 0.5]


def fixed_space_dimension(rep: ProjectiveRep, chi: Character) -> int:
    return int(_unit_eigvecs(rep, chi).shape[1])


def fix_phase(W: np.ndarray) -> np.ndarray:
    """Rescale by a phase so the first largest-modulus entry is real positive."""
    flat = W.ravel()
    mags = np.round(np.abs(flat), 9)
    k = int(np.argmax(mags))
    return W * (abs(flat[k]) / flat[k])


def fixed_point(rep: ProjectiveRep, chi: Character, check_irreducible: bool = True):
    """Unitary W with W V_g = chi(g) V_g W, unique up to phase; ``None`` if absent."""
    if check_irreducible and not is_irreducible(rep):
        raise DegenerateFixedSpace("representation is reducible; fixed points are not unique")
    vecs = _unit_eigvecs(rep, chi)
    if vecs.shape[1] == 0:
        return None
    if vecs.shape[1] > 1:
        raise DegenerateFixedSpace(f"eigenvalue-1 multiplicity {vecs.shape[1]} for {chi.label}")
    d = rep.dim
    W = vecs[:, 0].reshape(d, d) * np.sqrt(d)
    resid = float(np.linalg.norm(W.conj().T @ W - np.eye(d)))
    if resid > UNITARITY_TOL:
        raise NonUnitaryFixedPoint(f"fixed point of {chi.label} deviates from unitary by {resid:.3g}")
    return fix_phase(W)


def intertwining_residual(rep: ProjectiveRep, chi: Character, W: np.ndarray) -> float:
    """max_g ||W V_g - chi(g) V_g W||."""
    V = rep.matrices
    diff = W[None] @ V - chi.values[:, None, None] * (V @ W[None])
    return float(np.max(np.linalg.norm(diff, axis=(1, 2))))


@dataclass(frozen=True, eq=False)
class GateTable:
    rep: ProjectiveRep
    characters: list[Character]
    entries: dict[int, np.ndarray]
    alpha: dict[tuple[int, int], complex]
    product_index: dict[tuple[int, int], int]
    missing: list[int] = field(default_factory=list)

    def by_label(self, label: str) -> np.ndarray:
        for k, chi in enumerate(self.characters):
            if chi.label == label:
                return self.entries[k]
        raise KeyError(label)

    def group_law_residual(self) -> float:
        r = 0.0
        for (i, j), a in self.alpha.items():
            k = self.product_index[i, j]
            r = max(r, float(np.linalg.norm(self.entries[i] @ self.entries[j] - a * self.entries[k])))
        return r

    def intertwining_residual(self) -> float:
        return max(intertwining_residual(self.rep, self.characters[k], W)
                   for k, W in self.entries.items())

    def faithful(self, tol: float = 1e-6) -> bool:
        d = self.rep.dim
        for k, W in self.entries.items():
            scalar = abs(np.trace(W)) > d - tol
            if scalar != self.characters[k].is_trivial():
                return False
        return True


def _product_index(chars: list[Character]) -> dict[tuple[int, int], int]:
    out = {}
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            ab = a * b
            out[i, j] = next(k for k, c in enumerate(chars) if c.same_as(ab))
    return out


def gate_table(rep: ProjectiveRep, chars: list[Character] | None = None) -> GateTable:
    """Fixed points W_chi of every character's channel and their multiplication phases."""
    if not is_irreducible(rep):
        raise DegenerateFixedSpace("gate tables need an irreducible edge representation")
    chars = list(chars) if chars is not None else characters(rep.group)
    entries, missing = {}, []
    for k, chi in enumerate(chars):
        W = fixed_point(rep, chi, check_irreducible=False)
        if W is None:
            missing.append(k)
        else:
            entries[k] = W
    prod = _product_index(chars)
    alpha = {}
    d = rep.dim
    for i in entries:
        for j in entries:
            k = prod[i, j]
            if k not in entries:
                continue
            a = np.trace(entries[k].conj().T @ entries[i] @ entries[j]) / d
            if abs(abs(a) - 1) > 1e-9:
                raise NonUnitaryFixedPoint(f"|alpha| = {abs(a):.6g} for pair ({i}, {j})")
            alpha[i, j] = complex(a)
    table = GateTable(rep, chars, entries, alpha, prod, missing)
    assert table.faithful(), "a nontrivial character produced a scalar fixed point"
    return table


@dataclass(frozen=True)
class ProjectorAlgebraReport:
    max_residual: float
    tolerance: float
    pairs_checked: int
    worst_pair: tuple[str, str] | None

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


def check_projector_algebra(rep: ProjectiveRep, chars: list[Character] | None = None,
                            tol: float = 1e-10) -> ProjectorAlgebraReport:
    """Check Gamma_chi o Gamma_phi = delta Gamma_chi on every basis matrix E_ij."""
    chars = list(chars) if chars is not None else characters(rep.group)
    supers = [superoperator(rep, c) for c in chars]
    worst, pair = 0.0, None
    for i, Si in enumerate(supers):
        for j, Sj in enumerate(supers):
            diff = Si @ Sj - (Si if i == j else 0)
            # column c of diff is the image of the c-th basis matrix
            r = float(np.max(np.linalg.norm(diff, axis=0)))
            if r >= worst:
                worst, pair = r, (chars[i].label, chars[j].label)
    return ProjectorAlgebraReport(worst, tol, len(chars) ** 2, pair)


def complex_to_pairs(a) -> list:
    """Nested lists with every complex entry written as [re, im]."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def gate_table_to_json(table: GateTable) -> dict:
    labels = [c.label for c in table.characters]
    return {
        "group": table.rep.group.name,
        "dim": table.rep.dim,
        "gates": {labels[k]: complex_to_pairs(W) for k, W in table.entries.items()},
        "alpha": [[labels[i], labels[j], [a.real, a.imag]] for (i, j), a in table.alpha.items()],
        "missing": [labels[k] for k in table.missing],
    }
