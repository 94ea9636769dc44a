"""Time-dependent Hamiltonians on t in [0, 1] built from ramped local terms."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from ..errors import AxesNotOrthogonal, BadBoundaryIndex, BadChainLength, ConfigError
from ..spin import axis_operator, unit
from .hamiltonians import (ConservedOperator, conserved_operator, coupling_term, edge_coupled_chain,
                           string_operator, two_chain_layout, two_qubit_coupling, uniform_field_term)
from .layout import ChainLayout, OperatorTerm

__all__ = [
    "Ramp",
    "Profile",
    "LogicalFrame",
    "ScheduledHamiltonian",
    "elementary_gate_schedule",
    "transistor_schedule",
    "single_qubit_holonomy_schedule",
    "two_qubit_gate_schedule",
    "constant_schedule",
    "schedule_from_config",
    "logical_frame",
    "RAMP_SHAPES",
]


def _clip(s):
    return np.clip(s, 0.0, 1.0)


RAMP_SHAPES = {
    "const": lambda s: 1.0,
    "up": lambda s: np.sin(np.pi * s / 2) ** 2,
    "down": lambda s: np.cos(np.pi * s / 2) ** 2,
    "sincos": lambda s: np.sin(np.pi * s / 2) * np.cos(np.pi * s / 2),
    "linear_up": lambda s: s,
    "linear_down": lambda s: 1 - s,
}


@dataclass(frozen=True)
class Ramp:
    """A named shape on ``[start, stop]``, held at its end values outside."""

    shape: str
    start: float = 0.0
    stop: float = 1.0

    def __post_init__(self):
        if self.shape not in RAMP_SHAPES:
            raise ConfigError(f"unknown ramp shape {self.shape!r}; choose from {sorted(RAMP_SHAPES)}")
        if not 0 <= self.start < self.stop <= 1:
            raise ConfigError(f"ramp interval [{self.start}, {self.stop}] must lie in [0, 1]")

    def __call__(self, t: float) -> float:
        return float(RAMP_SHAPES[self.shape](_clip((t - self.start) / (self.stop - self.start))))


@dataclass(frozen=True)
class Profile:
    """sum over groups of the product of their ramps."""

    groups: tuple[tuple[Ramp, ...], ...]

    @classmethod
    def of(cls, *ramps: Ramp) -> "Profile":
        return cls((tuple(ramps),))

    @classmethod
    def const(cls) -> "Profile":
        return cls.of(Ramp("const"))

    def __add__(self, other: "Profile") -> "Profile":
        return Profile(self.groups + other.groups)

    def __call__(self, t: float) -> float:
        return float(sum(np.prod([r(t) for r in g]) for g in self.groups))


@dataclass(frozen=True, eq=False)
class LogicalFrame:
    """Logical Z and X operators (full-space, Hermitian, squaring to one) per qubit.

    |0...0> is the joint +1 eigenvector of all Z's inside the ground space and
    |b> = prod_k X_k^{b_k} |0...0>, qubit 0 most significant.
    """

    z_ops: tuple[sp.csr_matrix, ...]
    x_ops: tuple[sp.csr_matrix, ...]
    label: str = ""

    @property
    def n_qubits(self) -> int:
        return len(self.z_ops)


def logical_frame(layout: ChainLayout, extents, edges=None, label: str = "") -> LogicalFrame:
    """Z_L = -i Sigma^z and X_L = -i Sigma^x strings, one qubit per (extent, edge)."""
    extents = list(extents)
    edges = list(edges) if edges is not None else [None] * len(extents)
    zs, xs = [], []
    for n, e in zip(extents, edges):
        zs.append((-1j * conserved_operator(layout, "z", n, e).matrix).tocsr())
        xs.append((-1j * conserved_operator(layout, "x", n, e).matrix).tocsr())
    return LogicalFrame(tuple(zs), tuple(xs), label or f"extents={extents}")


@dataclass(frozen=True, eq=False)
class ScheduledHamiltonian:
    layout: ChainLayout
    terms: tuple[tuple[OperatorTerm, Profile], ...]
    description: str = ""
    conserved: tuple[ConservedOperator, ...] = ()
    logical_in: LogicalFrame | None = None
    logical_out: LogicalFrame | None = None
    reverse: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def _embedded(self):
        if "ops" not in self._cache:
            self._cache["ops"] = [term.embedded(self.layout) for term, _ in self.terms]
        return self._cache["ops"]

    def coefficients(self, t: float) -> np.ndarray:
        s = 1.0 - t if self.reverse else t
        c = np.array([prof(s) for _, prof in self.terms])
        if not np.all(np.isfinite(c)):
            raise ValueError(f"non-finite schedule value at t={t}")
        return c

    def hamiltonian(self, t: float) -> sp.csr_matrix:
        ops = self._embedded()
        c = self.coefficients(t)
        H = None
        for ck, op in zip(c, ops):
            if ck != 0:
                H = ck * op if H is None else H + ck * op
        if H is None:
            H = sp.csr_matrix((self.layout.total_dim,) * 2)
        if np.iscomplexobj(H.data) and (H.data.size == 0 or np.max(np.abs(H.data.imag)) == 0):
            H = H.real
        return H.tocsr()

    def dense(self, t: float) -> np.ndarray:
        return self.hamiltonian(t).toarray()

    def reversed(self) -> "ScheduledHamiltonian":
        return replace(self, reverse=not self.reverse, logical_in=self.logical_out,
                       logical_out=self.logical_in, description=f"reversed({self.description})",
                       _cache=self._cache)

    def symmetry_residual(self, times=None) -> float:
        """max over sampled t and declared conserved operators of ||[C, H(t)]||_max."""
        times = np.linspace(0, 1, 11) if times is None else times
        r = 0.0
        for t in times:
            H = self.hamiltonian(t)
            for C in self.conserved:
                r = max(r, C.commutator_residual(H))
        return r

    def hermiticity_residual(self, t: float) -> float:
        H = self.hamiltonian(t)
        d = (H - H.conj().T)
        return float(np.max(np.abs(d.data))) if d.nnz else 0.0


def _perp(axis) -> np.ndarray:
    n = unit(axis)
    for cand in (np.array([1.0, 0, 0]), np.array([0, 0, 1.0]), np.array([0, 1.0, 0])):
        if abs(n @ cand) < 1e-12:
            return cand
    p = np.cross(n, [0.0, 0.0, 1.0])
    if np.linalg.norm(p) < 1e-9:
        p = np.cross(n, [1.0, 0, 0])
    return p / np.linalg.norm(p)


def _default_perp(axis):
    if isinstance(axis, str) and axis in "xyz":
        return {"x": "z", "y": "z", "z": "x"}[axis]
    return _perp(axis)


def _axis_label(axis) -> str:
    return axis if isinstance(axis, str) else np.array2string(unit(axis), precision=4)


def elementary_gate_schedule(N: int, j: int = 0, beta: float = 0.0, axis="z", J: float = 1.0,
                             field: float = 1.0, perp=None) -> ScheduledHamiltonian:
    """Move the trivial/SP boundary from site j to j+1: ramp F_j on and H_{j,j+1} off."""
    if not 0 <= j <= N - 2:
        raise BadBoundaryIndex(f"boundary index j={j} must satisfy 0 <= j <= N-2 = {N - 2}")
    layout, chain = edge_coupled_chain(N, J, beta)
    const = Profile.const()
    terms = [(uniform_field_term(i, axis, field * J), const) for i in range(j)]
    for term in chain:
        if term.support == (j, j + 1):
            terms.append((term, Profile.of(Ramp("down"))))
        elif term.support[0] >= j + 1 or term.label == "edge":
            terms.append((term, const))
    terms.append((uniform_field_term(j, axis, field * J), Profile.of(Ramp("up"))))
    perp = _default_perp(axis) if perp is None else perp
    conserved = (conserved_operator(layout, axis, N), conserved_operator(layout, perp, N))
    return ScheduledHamiltonian(
        layout, tuple(terms), f"elementary(N={N}, j={j}, beta={beta:.6g}, axis={_axis_label(axis)})",
        conserved, logical_frame(layout, [N - j], label="in"), logical_frame(layout, [N - j - 1], label="out"))


def transistor_schedule(N: int, beta: float = 0.0, axis="z", J: float = 1.0, field: float = 1.0,
                        perp=None) -> ScheduledHamiltonian:
    """Global crossfade f(t) sum_i F_i + g(t) (H_SP + h_edge) over all spin-1 sites."""
    layout, chain = edge_coupled_chain(N, J, beta)
    terms = [(term, Profile.of(Ramp("down"))) for term in chain]
    terms += [(uniform_field_term(i, axis, field * J), Profile.of(Ramp("up"))) for i in range(N)]
    perp = _default_perp(axis) if perp is None else perp
    conserved = (conserved_operator(layout, axis, N), conserved_operator(layout, perp, N))
    return ScheduledHamiltonian(
        layout, tuple(terms), f"transistor(N={N}, beta={beta:.6g}, axis={_axis_label(axis)})",
        conserved, logical_frame(layout, [N], label="in"), logical_frame(layout, [0], label="out"))


def single_qubit_holonomy_schedule(N: int, beta: float = 0.0, first="z", second="x", J: float = 1.0,
                                   field: float = 1.0) -> ScheduledHamiltonian:
    """Decouple site 0 with field m, rotate the field m -> m_perp, recouple.

    Stages occupy [0, 1/3], [1/3, 2/3] and [2/3, 1].  During the middle stage
    the field is (S.n(theta))^2 with n(theta) = cos(theta) m + sin(theta) m_perp,
    theta: 0 -> pi/2, so the field keeps a unique ground state throughout.
    """
    m, p = unit(first), unit(second)
    if abs(m @ p) > 1e-9:
        raise AxesNotOrthogonal(f"field axes {m} and {p} are not orthogonal")
    layout, chain = edge_coupled_chain(N, J, beta)
    a, b, c = 0.0, 1 / 3, 2 / 3
    Sm, Sp = axis_operator(1, m), axis_operator(1, p)
    fm = OperatorTerm((0,), field * J * Sm @ Sm, "F0:m")
    fp = OperatorTerm((0,), field * J * Sp @ Sp, "F0:m_perp")
    cross = OperatorTerm((0,), field * J * (Sm @ Sp + Sp @ Sm), "F0:cross")
    terms = []
    for term in chain:
        if term.support == (0, 1):
            terms.append((term, Profile.of(Ramp("down", a, b)) + Profile.of(Ramp("up", c, 1.0))))
        else:
            terms.append((term, Profile.const()))
    terms += [
        (fm, Profile.of(Ramp("up", a, b), Ramp("down", b, c))),
        (cross, Profile.of(Ramp("sincos", b, c))),
        (fp, Profile.of(Ramp("up", b, c), Ramp("down", c, 1.0))),
    ]
    conserved = (conserved_operator(layout, np.cross(m, p), N),)
    frame = logical_frame(layout, [N])
    return ScheduledHamiltonian(
        layout, tuple(terms),
        f"holonomy(N={N}, beta={beta:.6g}, {_axis_label(first)} -> {_axis_label(second)})",
        conserved, frame, frame)


def two_qubit_gate_schedule(N: int, beta: float = 0.0, J: float = 1.0) -> ScheduledHamiltonian:
    """Decouple A0 and B0 from their chains into the ground state of J W^AB."""
    layout, chains = two_chain_layout(N, J, beta)
    a0, b0 = 0, N + 1
    ea, eb = N, 2 * N + 1
    terms = []
    for term in chains:
        if term.support in ((a0, a0 + 1), (b0, b0 + 1)):
            terms.append((term, Profile.of(Ramp("down"))))
        else:
            terms.append((term, Profile.const()))
    w = two_qubit_coupling(J)
    terms.append((OperatorTerm((a0, b0), w.matrix, "W^AB"), Profile.of(Ramp("up"))))
    alpha = string_operator(layout, "z", np.pi / 2, N, ea).matrix @ string_operator(layout, "x", np.pi, N, eb).matrix
    beta_op = string_operator(layout, "u", np.pi, N, ea).matrix @ string_operator(layout, "u", np.pi, N, eb).matrix
    conserved = (
        ConservedOperator(alpha.tocsr(), "(sqrtSigma^z, Sigma^x)"),
        ConservedOperator(beta_op.tocsr(), "(Sigma^u, Sigma^u)"),
        ConservedOperator(conserved_operator(layout, "z", N, ea).matrix, "(Sigma^z, 1)"),
        ConservedOperator(conserved_operator(layout, "z", N, eb).matrix, "(1, Sigma^z)"),
    )
    return ScheduledHamiltonian(
        layout, tuple(terms), f"two_qubit(N={N}, beta={beta:.6g})", conserved,
        logical_frame(layout, [N, N], [ea, eb], "in"),
        logical_frame(layout, [N - 1, N - 1], [ea, eb], "out"))


def constant_schedule(N: int, beta: float = 0.0, J: float = 1.0) -> ScheduledHamiltonian:
    """The static edge-coupled chain; its holonomy is the identity."""
    layout, chain = edge_coupled_chain(N, J, beta)
    frame = logical_frame(layout, [N])
    conserved = (conserved_operator(layout, "z", N), conserved_operator(layout, "x", N))
    return ScheduledHamiltonian(layout, tuple((t, Profile.const()) for t in chain),
                                f"constant(N={N}, beta={beta:.6g})", conserved, frame, frame)


def schedule_from_config(doc: dict) -> ScheduledHamiltonian:
    """Build a schedule on an edge-coupled chain from a declarative description.

    ``doc = {"N": 4, "beta": 0.0, "terms": [{"term": "H0,1", "ramp": "down",
    "interval": [0, 1]}, {"term": "F0:z", "ramp": "up"}, ...],
    "conserved": [["z", 4]], "logical_in": [4], "logical_out": [3]}``.
    Term names are the chain's own labels (``H{i},{i+1}``, ``edge``) or fields
    ``F{site}:{axis}``.  A term may list several ramps under ``"ramps"``
    whose product is used; repeating a term adds profiles.  Terms that are
    not listed are switched off.
    """
    try:
        N = int(doc["N"])
        beta = float(doc.get("beta", 0.0))
        J = float(doc.get("J", 1.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"schedule config needs numeric N (and optional beta, J): {exc}") from None
    layout, chain = edge_coupled_chain(N, J, beta)
    by_label = {t.label: t for t in chain}
    profiles: dict[str, Profile] = {}
    terms: dict[str, OperatorTerm] = {}
    for entry in doc.get("terms", []):
        name = entry.get("term")
        if name in by_label:
            terms[name] = by_label[name]
        elif isinstance(name, str) and name.startswith("F") and ":" in name:
            site, ax = name[1:].split(":", 1)
            if not site.isdigit() or int(site) >= N:
                raise ConfigError(f"field term {name!r} refers to a missing spin-1 site")
            terms[name] = uniform_field_term(int(site), ax, J)
        else:
            raise ConfigError(f"unknown term {name!r}; known: {sorted(by_label)} or F<site>:<axis>")
        specs = entry.get("ramps") or [{"ramp": entry.get("ramp", "const"),
                                         "interval": entry.get("interval", [0, 1])}]
        ramps = tuple(Ramp(s["ramp"], *map(float, s.get("interval", [0, 1]))) for s in specs)
        prof = Profile.of(*ramps)
        profiles[name] = profiles[name] + prof if name in profiles else prof
    if not terms:
        raise ConfigError("schedule config lists no terms")
    conserved = tuple(conserved_operator(layout, ax, int(n)) for ax, n in doc.get("conserved", []))
    lin = doc.get("logical_in", [N])
    lout = doc.get("logical_out", lin)
    if len(lin) != 1 or len(lout) != 1:
        raise ConfigError("config schedules carry exactly one logical qubit")
    for n in (*lin, *lout):
        if not 0 <= int(n) <= N:
            raise BadChainLength(f"logical extent {n} outside 0..{N}")
    return ScheduledHamiltonian(layout, tuple((terms[k], profiles[k]) for k in terms),
                                doc.get("description", "config"), conserved,
                                logical_frame(layout, lin, label="in"),
                                logical_frame(layout, lout, label="out"))
