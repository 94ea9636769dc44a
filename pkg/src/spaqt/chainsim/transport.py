"""Ground spaces, discrete parallel transport of degenerate frames, and gap profiles."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from ..errors import DegeneracyChange, NoGap, NonConvergent
from .schedules import LogicalFrame, ScheduledHamiltonian

__all__ = [
    "GroundSpace",
    "ground_space",
    "logical_basis",
    "HolonomyResult",
    "transport_holonomy",
    "gap_profile",
    "trace_fidelity",
    "phase_align",
    "DENSE_MAX",
]

# Dense LAPACK below this dimension, Lanczos (ARPACK) above.
DENSE_MAX = 1024
GAP_FLOOR = 1e-8
CLUSTER_REL = 1e-7


@dataclass(frozen=True)
class GroundSpace:
    frame: np.ndarray
    degeneracy: int
    gap: float
    energies: np.ndarray


def _lowest(H, k: int, dense_max: int, v0=None):
    n = H.shape[0]
    if n <= dense_max or k >= n - 1:
        A = H.toarray() if sp.issparse(H) else np.asarray(H)
        w, v = sla.eigh(A, subset_by_index=[0, min(k, n) - 1], driver="evr")
        return w, v
    w, v = eigsh(H, k=k, which="SA", tol=1e-13, v0=v0, ncv=max(2 * k + 1, 24))
    order = np.argsort(w)
    return w[order], v[:, order]


def ground_space(H, tol_rel: float = 1e-6, k: int | None = None, dense_max: int = DENSE_MAX,
                 v0=None) -> GroundSpace:
    """Lowest quasi-degenerate eigenvalue cluster of a Hermitian matrix.

    Eigenvalues within ``CLUSTER_REL * max(1, |E0|)`` of the minimum form the
    cluster; its spread must be below ``tol_rel * gap``.  Raises
    :class:`NoGap` when the gap is below ``1e-8``.
    """
    n = H.shape[0]
    k = min(k or 8, n)
    while True:
        w, v = _lowest(H, k, dense_max, v0)
        scale = max(1.0, abs(w[0]))
        deg = int(np.sum(w - w[0] <= CLUSTER_REL * scale))
        if deg < len(w) or k >= n:
            break
        k = min(2 * k, n)
    if deg >= len(w):
        raise NoGap("every eigenvalue belongs to the ground cluster")
    gap = float(w[deg] - w[deg - 1])
    if gap < GAP_FLOOR:
        raise NoGap(f"spectral gap {gap:.3g} below floor {GAP_FLOOR:g}")
    spread = float(w[deg - 1] - w[0])
    if spread > tol_rel * gap:
        raise NoGap(f"ground cluster spread {spread:.3g} not resolved against gap {gap:.3g}")
    return GroundSpace(v[:, :deg], deg, gap, w)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    j = int(np.argmax(np.round(np.abs(v), 9)))
    return v * (abs(v[j]) / v[j])


def logical_basis(frame: LogicalFrame, G: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Columns |b>, b in binary order, spanning the ground space ``G``."""
    q = frame.n_qubits
    if G.shape[1] != 2 ** q:
        raise ValueError(f"ground space of dimension {G.shape[1]} cannot carry {q} logical qubit(s)")
    P = np.eye(G.shape[1], dtype=complex)
    for Z in frame.z_ops:
        Zr = G.conj().T @ (Z @ G)
        P = P @ (np.eye(len(Zr)) + Zr) / 2
    w, v = np.linalg.eigh((P + P.conj().T) / 2)
    if not (w[-1] > 1 - tol and (len(w) == 1 or w[-2] < tol)):
        raise ValueError("logical Z operators do not fix a unique state in the ground space")
    zero = _fix_phase(G @ v[:, -1])
    cols = []
    for b in range(2 ** q):
        psi = zero
        for k in range(q):
            if (b >> (q - 1 - k)) & 1:
                psi = frame.x_ops[k] @ psi
        leak = np.linalg.norm(psi - G @ (G.conj().T @ psi))
        if leak > 1e-6:
            raise ValueError(f"logical X operators leave the ground space (leak {leak:.2e})")
        cols.append(psi)
    return np.array(cols).T


def _polar(M: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(M)
    return u @ vh


def trace_fidelity(U: np.ndarray, V: np.ndarray) -> float:
    """|tr(V^dag U)| / dim, phase-insensitive."""
    return float(abs(np.trace(V.conj().T @ U)) / U.shape[0])


def phase_align(U: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """U times the global phase that best matches ``ref``."""
    t = np.trace(ref.conj().T @ U)
    return U * (abs(t) / t) if abs(t) > 1e-14 else U


@dataclass(frozen=True, eq=False)
class HolonomyResult:
    logical_unitary: np.ndarray
    min_gap: float
    gap_profile: list[tuple[float, float]]
    steps: int
    frame_residual: float
    convergence: float
    degeneracy: int
    description: str = ""

    @property
    def converged(self) -> bool:
        return self.convergence < 1e-6

    def fidelity(self, target: np.ndarray) -> float:
        return trace_fidelity(self.logical_unitary, target)

    def to_json(self, target: np.ndarray | None = None) -> dict:
        from ..gatechan import complex_to_pairs
        out = {
            "description": self.description,
            "gate": complex_to_pairs(self.logical_unitary),
            "min_gap": self.min_gap,
            "steps": self.steps,
            "frame_residual": self.frame_residual,
            "convergence": self.convergence,
            "converged": self.converged,
        }
        if target is not None:
            out["fidelity_vs_target"] = self.fidelity(target)
        return out


def transport_holonomy(sched: ScheduledHamiltonian, steps: int = 512,
                       logical_in: LogicalFrame | None = None,
                       logical_out: LogicalFrame | None = None,
                       conv_tol: float = 1e-6, dense_max: int = DENSE_MAX,
                       tol_rel: float = 1e-6) -> HolonomyResult:
    """Transport the ground-space frame along t in [0, 1] in ``steps`` steps.

    Each step projects the frame onto the new ground space and
    re-orthonormalises it symmetrically (F <- G polar(G^dag F)).  The same
    ground spaces are reused for a run with half the steps; the two logical
    gates must agree to ``conv_tol`` after phase alignment.
    """
    if steps < 2 or steps % 2:
        raise ValueError("steps must be an even integer >= 2")
    logical_in = logical_in or sched.logical_in
    logical_out = logical_out or sched.logical_out
    ts = np.linspace(0.0, 1.0, steps + 1)
    g0 = ground_space(sched.hamiltonian(0.0), tol_rel, dense_max=dense_max)
    deg = g0.degeneracy
    B_in = logical_basis(logical_in, g0.frame)
    fine, coarse = B_in.copy(), B_in.copy()
    profile = [(0.0, g0.gap)]
    G = g0.frame
    k = deg + 6
    for i, t in enumerate(ts[1:], start=1):
        gs = ground_space(sched.hamiltonian(t), tol_rel, k=k, dense_max=dense_max, v0=G[:, 0])
        if gs.degeneracy != deg:
            raise DegeneracyChange(f"ground degeneracy {deg} -> {gs.degeneracy} at t={t:.6g}")
        G = gs.frame
        profile.append((float(t), gs.gap))
        fine = G @ _polar(G.conj().T @ fine)
        if i % 2 == 0:
            coarse = G @ _polar(G.conj().T @ coarse)
    B_out = logical_basis(logical_out, G)
    U = B_out.conj().T @ fine
    U_half = B_out.conj().T @ coarse
    resid = float(np.linalg.norm(U.conj().T @ U - np.eye(len(U)), 2))
    conv = float(np.linalg.norm(phase_align(U_half, U) - U, 2))
    if conv > conv_tol:
        raise NonConvergent(f"step doubling changed the gate by {conv:.3g} > {conv_tol:g}")
    return HolonomyResult(U, min(g for _, g in profile), profile, steps, resid, conv, deg,
                          sched.description)


def gap_profile(sched: ScheduledHamiltonian, samples: int = 101, dense_max: int = DENSE_MAX,
                workers: int = 1) -> list[tuple[float, float]]:
    """Spectral gap above the ground cluster at ``samples`` evenly spaced times."""
    ts = np.linspace(0.0, 1.0, samples)

    def one(t):
        return float(t), ground_space(sched.hamiltonian(t), dense_max=dense_max).gap

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(one, ts))
    return [one(t) for t in ts]
