"""Projective representations, factor systems and cohomology tests."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import NotProjective, NotRootOfUnity
from .groups import Character, FiniteGroup, _root, center

__all__ = [
    "ProjectiveRep",
    "FactorSystem",
    "GaugeFunction",
    "factor_system_of",
    "phi",
    "nontriviality_certificate",
    "gauge_transform",
    "are_equivalent",
    "coboundary_solution",
    "commutant_dimension",
    "is_irreducible",
    "trivial_rep",
    "pauli_rep",
    "direct_sum",
    "trivial_factor_system",
    "phase_exponents",
    "factor_system_to_json",
    "format_factor_table",
]

CLOSURE_TOL = 1e-10
PHI_TOL = 1e-6

PAULI = {
    "e": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class ProjectiveRep:
    """Unitary matrices ``matrices[g]`` with ``V_g V_h = omega(g,h) V_gh``."""

    group: FiniteGroup
    matrices: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[0] != self.group.order or m.shape[1] != m.shape[2]:
            raise ValueError(f"expected ({self.group.order}, d, d) matrices, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def dim(self) -> int:
        return int(self.matrices.shape[1])

    def __getitem__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def unitarity_residual(self) -> float:
        eye = np.eye(self.dim)
        return max(float(np.linalg.norm(V.conj().T @ V - eye)) for V in self.matrices)

    def closure_residual(self) -> float:
        return factor_system_of(self, tol=np.inf)[1]

    def rephase(self, beta: "GaugeFunction") -> "ProjectiveRep":
        return ProjectiveRep(self.group, self.matrices * beta.values[:, None, None])

    def twist(self, chi: Character) -> "ProjectiveRep":
        return ProjectiveRep(self.group, self.matrices * chi.values[:, None, None])


@dataclass(frozen=True, eq=False)
class FactorSystem:
    group: FiniteGroup
    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=complex)
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    def __call__(self, g: int, h: int) -> complex:
        return complex(self.omega[g, h])

    def cocycle_residual(self) -> float:
        """max |w(g,h) w(gh,k) - w(h,k) w(g,hk)| over all triples."""
        w, t = self.omega, self.group.table
        left = w[:, :, None] * w[t, :]            # w(g,h) w(gh,k)
        right = w[None, :, :] * w[np.arange(len(t))[:, None, None], t[None, :, :]]
        return float(np.max(np.abs(left - right)))

    def modulus_residual(self) -> float:
        return float(np.max(np.abs(np.abs(self.omega) - 1)))


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    """Phase function beta(g), used for rephasing reps and coboundaries."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if np.max(np.abs(np.abs(v) - 1)) > 1e-12:
            raise ValueError("gauge function must take unit-modulus values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, lattice: int | None = None) -> "GaugeFunction":
        if lattice:
            return cls(np.exp(2j * np.pi * rng.integers(0, lattice, n) / lattice))
        return cls(np.exp(2j * np.pi * rng.random(n)))


# ---------------------------------------------------------------------------


ROOT_SNAP = 1e-9


def factor_system_of(rep: ProjectiveRep, tol: float = CLOSURE_TOL):
    """Extract omega(g,h) from ``V_g V_h = omega V_gh``.

    Returns ``(FactorSystem, residual)``; raises :class:`NotProjective` when
    the worst proportionality residual exceeds ``tol``.  Values within
    ``ROOT_SNAP`` of a (2|G|)-th root of unity are replaced by that root, so
    sums such as phi come out exact for the usual representations.
    """
    G, V, d = rep.group, rep.matrices, rep.dim
    n = G.order
    prods = np.einsum("gij,hjk->ghik", V, V)
    targets = V[G.table]                                   # V_{gh}
    omega = np.einsum("ghij,ghij->gh", targets.conj(), prods) / d
    resid = float(np.max(np.abs(prods - omega[:, :, None, None] * targets)))
    mod = np.abs(omega)
    if np.isfinite(tol) and (resid > tol or np.max(np.abs(mod - 1)) > tol):
        raise NotProjective(f"projective closure residual {resid:.3g} exceeds {tol:g}")
    omega = omega / np.where(mod > 0, mod, 1)
    k = np.rint(np.angle(omega) * n / np.pi).astype(int)
    lattice = np.vectorize(lambda j: _root(j, 2 * n), otypes=[complex])(k)
    if np.max(np.abs(omega - lattice)) < ROOT_SNAP:
        omega = lattice
    return FactorSystem(G, omega), resid


def trivial_factor_system(G: FiniteGroup) -> FactorSystem:
    return FactorSystem(G, np.ones((G.order, G.order), dtype=complex))


def phi(omega: FactorSystem, a: int) -> complex:
    """sum_b omega(a,b) conj(omega(b,a))."""
    w = omega.omega
    return complex(np.sum(w[a, :] * w[:, a].conj()))


def nontriviality_certificate(omega: FactorSystem, tol: float = PHI_TOL) -> int | None:
    """A central element a with phi(a) != |G|, or None.

    A certificate proves the class of omega is nontrivial; ``None`` proves
    nothing.
    """
    G = omega.group
    for a in sorted(center(G).members):
        if abs(phi(omega, a) - G.order) > tol:
            return a
    return None


def gauge_transform(omega: FactorSystem, beta: GaugeFunction) -> FactorSystem:
    """omega'(g,h) = omega(g,h) beta(g) beta(h) / beta(gh)."""
    b, t = beta.values, omega.group.table
    return FactorSystem(omega.group, omega.omega * b[:, None] * b[None, :] / b[t])


def phase_exponents(values: np.ndarray, order: int, tol: float = 1e-9) -> np.ndarray:
    """Integers k with values == exp(2 pi i k / order); NotRootOfUnity otherwise."""
    k = np.rint(np.angle(values) * order / (2 * np.pi)).astype(np.int64) % order
    if np.max(np.abs(np.exp(2j * np.pi * k / order) - values)) > tol:
        raise NotRootOfUnity(f"values are not {order}-th roots of unity")
    return k


def _solve_mod(A: list[list[int]], c: list[int], M: int) -> list[int] | None:
    """Solve A x = c (mod M) by Smith-style diagonalisation over the integers.

    Row operations are applied to ``c`` alongside ``A``; column operations
    are accumulated in ``V`` so that x = V y.
    """
    A = [row[:] for row in A]
    c = [ci % M for ci in c]
    m, n = len(A), len(A[0])
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        c[i], c[j] = c[j], c[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    c[i] = (c[i] - q * c[t]) % M
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
            rest = [(i, t) for i in range(t + 1, m) if A[i][t]] + \
                   [(t, j) for j in range(t + 1, n) if A[t][j]]
            if not rest:
                break
            i, j = min(rest, key=lambda ij: abs(A[ij[0]][ij[1]]))
            if j == t:
                swap_rows(t, i)
            else:
                swap_cols(t, j)
        diag.append(A[t][t])

    y = [0] * n
    for t, d in enumerate(diag):
        g = gcd(d, M)
        if c[t] % g:
            return None
        Mg = M // g
        y[t] = (c[t] // g) * pow((d // g) % Mg, -1, Mg) % Mg if Mg > 1 else 0
    if any(c[i] % M for i in range(len(diag), m)):
        return None
    return [sum(V[i][j] * y[j] for j in range(n)) % M for i in range(n)]


def coboundary_solution(rho: FactorSystem, order: int) -> np.ndarray | None:
    """Exponents b with rho(g,h) = z^(b(g)+b(h)-b(gh)), z = exp(2 pi i/order).

    ``rho`` must take values in the order-th roots of unity.
    """
    G = rho.group
    r = phase_exponents(rho.omega, order)
    n = G.order
    A, c = [], []
    for g in range(n):
        for h in range(n):
            row = [0] * n
            row[g] += 1
            row[h] += 1
            row[G.mul(g, h)] -= 1
            A.append(row)
            c.append(int(r[g, h]))
    sol = _solve_mod(A, c, order)
    return None if sol is None else np.array(sol, dtype=np.int64)


def are_equivalent(omega: FactorSystem, nu: FactorSystem) -> bool:
    """True iff omega/nu is a 2-coboundary.

    Both cocycles must take values in the (2|G|)-th roots of unity.  The
    coboundary equation is solved exactly over Z/M with
    M = 2|G| * exponent(G); if omega/nu = d(beta) for any U(1)-valued beta,
    then beta can be taken M-valued, so the search is complete.
    """
    G = omega.group
    lattice = 2 * G.order
    phase_exponents(omega.omega, lattice)
    phase_exponents(nu.omega, lattice)
    M = lattice * G.exponent()
    rho = FactorSystem(G, omega.omega * nu.omega.conj())
    b = coboundary_solution(rho, M)
    if b is None:
        return False
    beta = np.exp(2j * np.pi * b / M)
    check = beta[:, None] * beta[None, :] / beta[G.table]
    assert np.allclose(check, rho.omega, atol=1e-9)
    return True


def commutant_dimension(rep: ProjectiveRep, tol: float = 1e-9) -> int:
    """dim {M : M V_g = V_g M for all g}."""
    d = rep.dim
    eye = np.eye(d)
    # row-major vec: vec(V M) = (V (x) I) vec M,  vec(M V) = (I (x) V^T) vec M
    blocks = [np.kron(V, eye) - np.kron(eye, V.T) for V in rep.matrices]
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    scale = max(1.0, float(s[0]))
    return int(np.sum(s < tol * scale)) + max(0, d * d - len(s))


def is_irreducible(rep: ProjectiveRep) -> bool:
    return commutant_dimension(rep) == 1


# ---------------------------------------------------------------------------
# standard representations


def trivial_rep(G: FiniteGroup, dim: int = 1) -> ProjectiveRep:
    return ProjectiveRep(G, np.broadcast_to(np.eye(dim, dtype=complex), (G.order, dim, dim)).copy())


def pauli_rep(G: FiniteGroup) -> ProjectiveRep:
    """The Pauli representation e->I, x->X, y->Y, z->Z of the Klein group."""
    if sorted(G.labels) != ["e", "x", "y", "z"]:
        raise ValueError("pauli_rep needs the Klein group with labels e, x, y, z")
    return ProjectiveRep(G, np.array([PAULI[l] for l in G.labels]))


def direct_sum(a: ProjectiveRep, b: ProjectiveRep) -> ProjectiveRep:
    if a.group is not b.group and not np.array_equal(a.group.table, b.group.table):
        raise ValueError("representations of different groups")
    da, db = a.dim, b.dim
    out = np.zeros((a.group.order, da + db, da + db), dtype=complex)
    out[:, :da, :da] = a.matrices
    out[:, da:, da:] = b.matrices
    return ProjectiveRep(a.group, out)


# ---------------------------------------------------------------------------
# export


def _minimal_lattice(omega: FactorSystem) -> int:
    top = 2 * omega.group.order * omega.group.exponent()
    for M in range(1, top + 1):
        if top % M:
            continue
        try:
            phase_exponents(omega.omega, M)
            return M
        except NotRootOfUnity:
            continue
    raise NotRootOfUnity("factor system is not valued in a finite root-of-unity lattice")


def factor_system_to_json(omega: FactorSystem) -> dict:
    M = _minimal_lattice(omega)
    return {"labels": list(omega.group.labels), "root_order": M,
            "exponents": phase_exponents(omega.omega, M).tolist()}


def _phase_str(z: complex) -> str:
    for s, v in (("1", 1), ("-1", -1), ("i", 1j), ("-i", -1j)):
        if abs(z - v) < 1e-9:
            return s
    return f"e^{{{np.angle(z) / np.pi:+.4g}πi}}"


def format_factor_table(omega: FactorSystem) -> str:
    """Plain-text table with omega(row, column) entries."""
    labels = omega.group.labels
    cells = [["ω"] + list(labels)]
    for g, lg in enumerate(labels):
        cells.append([lg] + [_phase_str(omega(g, h)) for h in range(len(labels))])
    width = max(len(c) for row in cells for c in row)
    lines = [" | ".join(c.rjust(width) for c in row) for row in cells]
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines)
