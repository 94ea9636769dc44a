"""Logical single-qubit synthesis from pi-rotations of D2 embeddings in SO(3).

Convention: a rotation by ``angle`` about unit ``n`` is exp(i (angle/2) n.sigma),
so a pi-rotation is i n.sigma.  All gate comparisons ignore global phase.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import AxesNotOrthogonal, NotUnitAxis, ParallelAxes

__all__ = [
    "Embedding",
    "LogicalRotation",
    "pi_rotation",
    "rotation",
    "compose_pi_rotations",
    "embedding_gate_set",
    "SynthesisReport",
    "predict_chain_gate",
    "standard_embedding",
    "rotated_embedding",
    "reference_embeddings",
    "TARGET_GATES",
    "gate_fidelity",
    "embeddings_from_config",
]

SIGMA = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)

TARGET_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
}
# A gate counts as reached when it matches the target or (for S) its inverse.
ACCEPTED_INVERSES = {"S"}


def _unit(v, tol: float = 1e-9) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if abs(n - 1) > tol:
        raise NotUnitAxis(f"axis {v} has norm {n:.6g}")
    return v


def gate_fidelity(U: np.ndarray, V: np.ndarray) -> float:
    return float(abs(np.trace(V.conj().T @ U)) / U.shape[0])


@dataclass(frozen=True, eq=False)
class LogicalRotation:
    axis: np.ndarray
    angle: float
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        expected = _su2(self.axis, self.angle)
        if np.max(np.abs(expected - self.matrix)) > 1e-12:
            raise ValueError("matrix does not match (axis, angle)")


def _su2(axis, angle: float) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    return np.cos(angle / 2) * np.eye(2) + 1j * np.sin(angle / 2) * np.einsum("k,kij->ij", n, SIGMA)


def rotation(axis, angle: float, label: str = "") -> LogicalRotation:
    n = _unit(axis)
    return LogicalRotation(n, float(angle), _su2(n, angle), label)


def pi_rotation(axis, label: str = "") -> LogicalRotation:
    return rotation(axis, np.pi, label)


def compose_pi_rotations(m, m_prime) -> LogicalRotation:
    """A pi-rotation about m followed by one about m'.

    Geometrically this is a rotation by 2 arccos(m.m') about m x m'.  With
    the exp(+i(a/2) n.sigma) convention the same SO(3) rotation carries the
    SU(2) label (axis m' x m, angle 2 arccos(m.m')), which is what is
    returned.  The matrix R(m') R(m) is checked against it up to global phase.
    """
    m, mp = _unit(m), _unit(m_prime)
    c = np.cross(m, mp)
    if np.linalg.norm(c) < 1e-9:
        raise ParallelAxes("parallel or antiparallel axes compose to a trivial rotation")
    dot = float(np.clip(m @ mp, -1, 1))
    # (i m'.s)(i m.s) = -(m'.m) - i (m' x m).s = -exp(i (a/2) (m' x m).s / |m' x m|)
    axis = -c / np.linalg.norm(c)
    result = rotation(axis, 2 * np.arccos(dot), f"pi[{_fmt(m)}] then pi[{_fmt(mp)}]")
    direct = pi_rotation(mp).matrix @ pi_rotation(m).matrix
    assert gate_fidelity(direct, result.matrix) > 1 - 1e-10, "composition formula mismatch"
    return result


def _fmt(v) -> str:
    return ",".join(f"{x:.4g}" for x in v)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Ordered right-handed orthonormal frame (m, m_perp, m x m_perp)."""

    axes: np.ndarray
    label: str = ""

    def __post_init__(self):
        a = np.asarray(self.axes, dtype=float).reshape(3, 3)
        for v in a:
            _unit(v)
        if np.max(np.abs(a @ a.T - np.eye(3))) > 1e-9:
            raise AxesNotOrthogonal("embedding axes are not pairwise orthogonal")
        if np.linalg.det(a) < 0:
            raise AxesNotOrthogonal("embedding axes are not right-handed")
        object.__setattr__(self, "axes", a)

    @classmethod
    def from_pair(cls, m, m_perp, label: str = "") -> "Embedding":
        m, p = _unit(m), _unit(m_perp)
        if abs(m @ p) > 1e-9:
            raise AxesNotOrthogonal(f"axes {_fmt(m)} and {_fmt(p)} are not orthogonal")
        return cls(np.array([m, p, np.cross(m, p)]), label)


def standard_embedding() -> Embedding:
    return Embedding(np.eye(3), "standard")


def rotated_embedding(angle: float, label: str = "") -> Embedding:
    """The standard frame rotated by ``angle`` about z."""
    c, s = np.cos(angle), np.sin(angle)
    Rz = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    return Embedding((Rz @ np.eye(3)).T, label or f"standard rotated {angle:.4g} about z")


def reference_embeddings() -> list[Embedding]:
    mu = np.array([1, 0, 1]) / np.sqrt(2)
    nu = np.array([1, 0, -1]) / np.sqrt(2)
    return [
        standard_embedding(),
        rotated_embedding(-np.pi / 4, "rot(-pi/4)"),
        rotated_embedding(-np.pi / 8, "rot(-pi/8)"),
        Embedding(np.array([mu, nu, np.cross(mu, nu)]), "mu-nu-y"),
    ]


@dataclass
class SynthesisReport:
    rotations: list[LogicalRotation]
    reached: dict[str, bool]
    witnesses: dict[str, str]
    residuals: dict[str, float]
    compositions: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def all_reached(self) -> bool:
        return all(self.reached.values())

    def to_json(self) -> dict:
        return {
            "n_pi_rotations": len(self.rotations),
            "n_compositions": self.compositions,
            "reached": self.reached,
            "witnesses": self.witnesses,
            "residuals": self.residuals,
            "notes": self.notes,
        }


def _match(U, target: str, tol: float):
    T = TARGET_GATES[target]
    cands = [(T, target)]
    if target in ACCEPTED_INVERSES:
        cands.append((T.conj().T, target + "^dag"))
    best = None
    for M, name in cands:
        r = 1 - gate_fidelity(U, M)
        if best is None or r < best[0]:
            best = (r, name)
    return best[0] < tol, best


def embedding_gate_set(embeddings: list[Embedding], tol: float = 1e-10) -> SynthesisReport:
    """All pi-rotations of the embeddings, their pairwise compositions, and H/S/T reachability.

    A target not reached by a single rotation or a two-rotation composition
    is tried as a product of two already-reached gates (so S can arise as T^2).
    """
    rots = []
    for E in embeddings:
        for k, n in enumerate(E.axes):
            rots.append(pi_rotation(n, f"{E.label or 'E'}[{k}]"))
    gates = [(r.matrix, r.label) for r in rots]
    comps = 0
    for a, b in itertools.permutations(rots, 2):
        if np.linalg.norm(np.cross(a.axis, b.axis)) < 1e-9:
            continue
        c = compose_pi_rotations(a.axis, b.axis)
        gates.append((c.matrix, f"{a.label} then {b.label}"))
        comps += 1
    reached, witnesses, residuals, notes = {}, {}, {}, []
    for target in TARGET_GATES:
        hit = None
        for U, label in gates:
            ok, (r, name) = _match(U, target, tol)
            if ok and (hit is None or r < hit[0]):
                hit = (r, f"{label} = {name}")
        reached[target] = hit is not None
        if hit:
            witnesses[target], residuals[target] = hit[1], hit[0]
    for target in TARGET_GATES:
        if reached[target]:
            continue
        for other in TARGET_GATES:
            if not reached[other] or other == target:
                continue
            W = _gate_from_witness(gates, witnesses[other])
            ok, (r, name) = _match(W @ W, target, tol)
            if ok:
                reached[target] = True
                witnesses[target] = f"({witnesses[other]})^2 = {name}"
                residuals[target] = r
                notes.append(f"{target} obtained as the square of {other}")
                break
    return SynthesisReport(rots, reached, witnesses, residuals, comps, notes)


def _gate_from_witness(gates, witness: str) -> np.ndarray:
    label = witness.rsplit(" = ", 1)[0]
    return next(U for U, l in gates if l == label)


def predict_chain_gate(embedding: Embedding, field_axis: int = 0, holonomy: bool = False) -> LogicalRotation:
    """Logical rotation expected from the chain for a field along ``axes[field_axis]``.

    Decoupling with a field along m gives a pi-rotation about m.  The full
    decouple / rotate / recouple holonomy with fields m then m_perp gives a
    pi-rotation about m x m_perp.
    """
    if field_axis not in (0, 1, 2):
        raise ValueError("field_axis must index one of the embedding's three axes")
    if holonomy:
        m, p = embedding.axes[field_axis], embedding.axes[(field_axis + 1) % 3]
        return pi_rotation(np.cross(m, p), "holonomy")
    return pi_rotation(embedding.axes[field_axis], "decouple")


def embeddings_from_config(doc) -> list[Embedding]:
    """Embeddings from ``[{"m": [..], "m_perp": [..], "label": ..}, ...]`` or the string ``"reference"``.

    Normalisation is applied to the given vectors; orthogonality is checked.
    """
    from .errors import ConfigError
    if doc in ("reference", None):
        return reference_embeddings()
    if isinstance(doc, dict):
        doc = doc.get("embeddings", doc)
    out = []
    try:
        for k, e in enumerate(doc):
            if isinstance(e, str):
                named = {E.label: E for E in reference_embeddings()}
                out.append(named[e])
                continue
            m = np.asarray(e["m"], float)
            p = np.asarray(e["m_perp"], float)
            out.append(Embedding.from_pair(m / np.linalg.norm(m), p / np.linalg.norm(p),
                                           e.get("label", f"E{k}")))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad embedding entry: {exc!r}") from None
    return out
