"""(U_g, V_g)-symmetric MPS tensors.

Index convention: ``tensor[i, a, b]`` is A^i_{ab}; the matrix A^i maps the
right virtual index b to the left virtual index a.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NonOrthonormalStates, ShapeMismatch
from .gatechan import GateTable, apply_gamma, complex_to_pairs
from .groups import Character, characters
from .projrep import PAULI, ProjectiveRep, factor_system_of
from .symmetry import klein_group, klein_pauli_rep

__all__ = [
    "SymmetricMPSTensor",
    "SymmetryReport",
    "check_symmetric",
    "project_physical",
    "from_fixed_points",
    "aklt_tensor",
    "cluster_tensor",
    "character_states",
    "transfer_matrix",
    "transfer_symmetry_residual",
    "theorem_residual",
    "equal_up_to_character_phases",
    "tensor_to_json",
    "CARTESIAN_TO_SZ",
    "PLUSMINUS_TO_COMPUTATIONAL",
]

# Columns are |x>, |y>, |z> (zero-eigenvectors of Sx, Sy, Sz) written in the
# Sz basis ordered m = +1, 0, -1.
CARTESIAN_TO_SZ = np.array([
    [-1, 1j, 0],
    [0, 0, np.sqrt(2)],
    [1, 1j, 0],
], dtype=complex) / np.sqrt(2)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Columns are |++>, |+->, |-+>, |--> in the computational basis of two qubits.
PLUSMINUS_TO_COMPUTATIONAL = np.kron(_H, _H)


@dataclass(frozen=True, eq=False)
class SymmetricMPSTensor:
    tensor: np.ndarray
    u_rep: ProjectiveRep
    v_rep: ProjectiveRep
    basis: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=complex)
        if t.ndim != 3 or t.shape[1] != t.shape[2]:
            raise ShapeMismatch(f"tensor must have shape (d, D, D), got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "tensor", t)

    @property
    def phys_dim(self) -> int:
        return int(self.tensor.shape[0])

    @property
    def virt_dim(self) -> int:
        return int(self.tensor.shape[1])

    def basis_state(self, name: str) -> np.ndarray:
        e = np.zeros(self.phys_dim, dtype=complex)
        e[self.basis.index(name)] = 1
        return e


@dataclass(frozen=True)
class SymmetryReport:
    max_residual: float
    linearity_residual: float
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance and self.linearity_residual < self.tolerance


def _check_shapes(A: SymmetricMPSTensor):
    if A.u_rep.dim != A.phys_dim or A.v_rep.dim != A.virt_dim:
        raise ShapeMismatch(
            f"tensor ({A.phys_dim}, {A.virt_dim}) vs reps U:{A.u_rep.dim}, V:{A.v_rep.dim}")
    if A.u_rep.group.order != A.v_rep.group.order:
        raise ShapeMismatch("U and V represent groups of different order")


def check_symmetric(A: SymmetricMPSTensor, tol: float = 1e-10) -> SymmetryReport:
    """max over g, i of || V_g A^i V_g^dag - sum_j A^j (U_g)_{ji} ||."""
    _check_shapes(A)
    V, U, T = A.v_rep.matrices, A.u_rep.matrices, A.tensor
    lhs = np.einsum("gab,ibc,gdc->giad", V, T, V.conj())
    rhs = np.einsum("jad,gji->giad", T, U)
    resid = float(np.max(np.linalg.norm(lhs - rhs, axis=(2, 3))))
    omega, lin = factor_system_of(A.u_rep, tol=np.inf)
    omega_dev = float(np.max(np.abs(omega.omega - 1)))
    return SymmetryReport(resid, max(lin, omega_dev), tol)


def project_physical(A: SymmetricMPSTensor, psi) -> np.ndarray:
    """A[psi] = sum_i A^i <i|psi>."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape[0] != A.phys_dim:
        raise ShapeMismatch(f"state of length {psi.shape[0]} for physical dimension {A.phys_dim}")
    n = np.linalg.norm(psi)
    if n > 0 and abs(n - 1) > 1e-9:
        warnings.warn(f"physical state has norm {n:.6g}", stacklevel=2)
    return np.einsum("iab,i->ab", A.tensor, psi)


def character_states(u_rep: ProjectiveRep, chars: list[Character] | None = None) -> dict[int, np.ndarray]:
    """For each character whose isotypic subspace is one-dimensional, a unit vector in it."""
    chars = chars if chars is not None else characters(u_rep.group)
    out = {}
    for k, chi in enumerate(chars):
        P = np.einsum("g,gij->ij", chi.values.conj(), u_rep.matrices) / u_rep.group.order
        w, v = np.linalg.eigh((P + P.conj().T) / 2)
        cols = v[:, w > 0.5]
        if cols.shape[1] == 1:
            vec = cols[:, 0]
            j = int(np.argmax(np.round(np.abs(vec), 9)))
            out[k] = vec * abs(vec[j]) / vec[j]
    return out


def from_fixed_points(gates: GateTable, chi_states: dict) -> SymmetricMPSTensor:
    """Build A = sum_chi W_chi (x) <chi|.

    ``chi_states`` maps a character (index into ``gates.characters`` or its
    label) to a physical basis vector; the vectors must be orthonormal.
    """
    labels = [c.label for c in gates.characters]
    keys = [labels.index(k) if isinstance(k, str) else int(k) for k in chi_states]
    if len(set(keys)) != len(keys):
        raise NonOrthonormalStates("the same character is used twice")
    vecs = np.array([np.asarray(v, dtype=complex) for v in chi_states.values()])
    gram = vecs.conj() @ vecs.T
    if np.max(np.abs(gram - np.eye(len(keys)))) > 1e-9:
        raise NonOrthonormalStates("physical character states are not orthonormal")
    d = vecs.shape[1]
    D = gates.rep.dim
    T = np.zeros((d, D, D), dtype=complex)
    U = np.broadcast_to(np.eye(d, dtype=complex), (gates.rep.group.order, d, d)).copy()
    for k, v in zip(keys, vecs):
        T += np.einsum("ab,i->iab", gates.entries[k], v.conj())
        proj = np.outer(v, v.conj())
        U += (gates.characters[k].values[:, None, None] - 1) * proj[None]
    u_rep = ProjectiveRep(gates.rep.group, U)
    return SymmetricMPSTensor(T, u_rep, gates.rep, label="from_fixed_points")


def _aklt_u_rep(G) -> ProjectiveRep:
    # |m> carries the character with kernel {e, m}
    chi = {c.label: c for c in characters(G)}
    diag = np.array([[chi[f"chi_{m}"](g) for m in "xyz"] for g in G.elements])
    return ProjectiveRep(G, np.array([np.diag(r) for r in diag]))


def aklt_tensor() -> SymmetricMPSTensor:
    """A = sum_m sigma^m (x) <m| in the Cartesian basis |x>, |y>, |z>."""
    G = klein_group()
    T = np.array([PAULI[m] for m in "xyz"])
    return SymmetricMPSTensor(T, _aklt_u_rep(G), klein_pauli_rep(G), ("x", "y", "z"), "AKLT")


def cluster_tensor() -> SymmetricMPSTensor:
    """A = 1<++| + X<+-| + Z<-+| - iY<--| on a blocked pair of qubits."""
    G = klein_group()
    T = np.array([PAULI["e"], PAULI["x"], PAULI["z"], -1j * PAULI["y"]])
    # x acts as sigma^x on the first qubit, z as sigma^x on the second (diagonal in +/-)
    sx1 = np.diag([1, 1, -1, -1]).astype(complex)
    sx2 = np.diag([1, -1, 1, -1]).astype(complex)
    act = {"e": np.eye(4, dtype=complex), "x": sx1, "z": sx2, "y": sx1 @ sx2}
    u_rep = ProjectiveRep(G, np.array([act[l] for l in G.labels]))
    return SymmetricMPSTensor(T, u_rep, klein_pauli_rep(G), ("++", "+-", "-+", "--"), "cluster")


def transfer_matrix(A: SymmetricMPSTensor) -> np.ndarray:
    """E = sum_i A^i (x) conj(A^i)."""
    return np.einsum("iab,icd->acbd", A.tensor, A.tensor.conj()).reshape(A.virt_dim ** 2, -1)


def transfer_symmetry_residual(A: SymmetricMPSTensor) -> float:
    E = transfer_matrix(A)
    r = 0.0
    for V in A.v_rep.matrices:
        W = np.kron(V, V.conj())
        r = max(r, float(np.linalg.norm(W @ E @ W.conj().T - E)))
    return r


def theorem_residual(A: SymmetricMPSTensor) -> dict[str, float]:
    """||Gamma_chi(A[chi]) - A[chi]|| for each character with nonzero A[chi]."""
    chars = characters(A.v_rep.group)
    out = {}
    for k, psi in character_states(A.u_rep, chars).items():
        M = project_physical(A, psi)
        if np.linalg.norm(M) > 1e-12:
            out[chars[k].label] = float(np.linalg.norm(apply_gamma(A.v_rep, chars[k], M) - M))
    return out


def equal_up_to_character_phases(A: SymmetricMPSTensor, B: SymmetricMPSTensor,
                                 tol: float = 1e-10) -> bool:
    """A[chi] = c_chi B[chi] with |c_chi| = 1 for every character state of A."""
    if A.tensor.shape != B.tensor.shape:
        return False
    for psi in character_states(A.u_rep).values():
        a, b = project_physical(A, psi), project_physical(B, psi)
        nb = np.vdot(b, b)
        if abs(nb) < tol:
            if np.linalg.norm(a) > tol:
                return False
            continue
        c = np.vdot(b, a) / nb
        if abs(abs(c) - 1) > 1e-8 or np.linalg.norm(a - c * b) > tol * max(1.0, np.linalg.norm(a)):
            return False
    return True


def tensor_to_json(A: SymmetricMPSTensor) -> dict:
    return {
        "label": A.label,
        "phys_dim": A.phys_dim,
        "virt_dim": A.virt_dim,
        "basis": list(A.basis),
        "tensor": complex_to_pairs(A.tensor),
    }
