"""Command-line experiment driver.

    spaqt elementary --n 4 --beta -0.3333 --axis z --steps 512
    spaqt universality --embeddings embeddings.json
    spaqt verify_all --out report.json

Every run produces a report with one entry per assertion (measured value
and tolerance).  The exit status is 1 when any assertion fails and 2 for
invalid configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, SpaqtError, UnsupportedFormat

__all__ = ["ExperimentConfig", "Assertion", "Report", "run", "emit", "main", "SCENARIOS",
           "load_config_file"]

SCENARIOS = ("groups", "reps", "gates", "elementary", "transistor", "holonomy", "two_qubit",
             "universality", "verify_all")

DEFAULT_TOLERANCES = {
    "exact": 1e-10,
    "gate": 1e-9,
    "fidelity": 1e-6,
    "holonomy": 1e-4,
    "two_qubit": 1e-2,
    "symmetry": 1e-10,
    "convergence": 1e-6,
}


@dataclass
class ExperimentConfig:
    scenario: str = "verify_all"
    n: int | None = None
    beta: float | None = None
    axis: str = "z"
    axis2: str = "x"
    steps: int | None = None
    samples: int = 21
    seed: int = 12345
    embeddings: str | None = None
    schedule: str | None = None
    out: str | None = None
    format: str = "json"
    parallel: bool = False
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def validate(self) -> "ExperimentConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose one of {', '.join(SCENARIOS)}")
        if self.steps is not None and (self.steps < 2 or self.steps % 2):
            raise ConfigError(f"--steps must be an even integer >= 2 (got {self.steps})")
        if self.n is not None and self.n < 2:
            raise ConfigError(f"--n must be at least 2 (got {self.n})")
        if self.samples < 2:
            raise ConfigError("--samples must be at least 2")
        if self.format not in ("json", "csv", "text"):
            raise UnsupportedFormat(f"unsupported format {self.format!r}; use json, csv or text")
        for axis in (self.axis, self.axis2):
            if axis not in ("x", "y", "z", "u", "v", "mu", "nu"):
                raise ConfigError(f"axis {axis!r} is not one of x, y, z, u, v, mu, nu")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive")
        return self


@dataclass
class Assertion:
    name: str
    passed: bool
    measured: object
    tolerance: object
    criterion: int | None = None


@dataclass
class Report:
    scenario: str
    config: dict
    results: dict = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)
    wall_time: float = 0.0
    version: str = __version__
    profile: list[tuple[float, float]] | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def check(self, name: str, passed: bool, measured, tolerance, criterion: int | None = None):
        self.assertions.append(Assertion(name, bool(passed), measured, tolerance, criterion))

    def check_runtime(self, name: str, seconds: float, limit: float, criterion: int | None = None):
        # elapsed times live with wall_time so the rest of the payload is reproducible
        self.timings[name] = seconds
        self.check(name, seconds < limit, "see wall_time", limit, criterion)

    def payload(self) -> dict:
        return {
            "scenario": self.scenario,
            "config": self.config,
            "results": self.results,
            "assertions": [asdict(a) for a in self.assertions],
            "passed": self.passed,
            "version": self.version,
        }


# ---------------------------------------------------------------------------
# JSON helpers


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _matrix(U) -> list:
    U = np.asarray(U, dtype=complex)
    return np.stack([U.real, U.imag], axis=-1).round(12).tolist()


# ---------------------------------------------------------------------------
# scenarios


def _scenario_groups(cfg: ExperimentConfig, rep: Report):
    from .groups import (abelianization, build_named_group, center, derived_subgroup, group_to_json,
                         is_isomorphic)
    from .symmetry import g2_group
    t0 = time.perf_counter()
    G = g2_group()
    Z, D = center(G), derived_subgroup(G)
    A, _ = abelianization(G)
    iso = is_isomorphic(G, build_named_group("D2_semidirect_Z4"))
    dt = time.perf_counter() - t0
    rep.results.update({"order": G.order, "center": Z.labels(), "derived": D.labels(),
                        "abelianization_order": A.order, "isomorphic_to_D2_semidirect_Z4": iso,
                        "group": group_to_json(G)})
    rep.check("|G2| = 16", G.order == 16, G.order, 16, 1)
    rep.check("|Z(G2)| = 4", Z.order == 4, Z.order, 4, 1)
    rep.check("|G2'| = 2", D.order == 2, D.order, 2, 1)
    rep.check("|G2/G2'| = 8", A.order == 8, A.order, 8, 1)
    rep.check("G2 isomorphic to D2 x| Z4", iso, iso, True, 1)
    rep.check_runtime("group facts under 1 s", dt, 1.0, 1)


def _scenario_reps(cfg: ExperimentConfig, rep: Report):
    from .groups import center
    from .projrep import (GaugeFunction, are_equivalent, commutant_dimension, direct_sum,
                          factor_system_of, factor_system_to_json, format_factor_table, gauge_transform,
                          nontriviality_certificate, phi, trivial_factor_system)
    from .symmetry import g2_half_half_rep, klein_pauli_rep
    t0 = time.perf_counter()
    pauli = klein_pauli_rep()
    K = pauli.group
    w_p, _ = factor_system_of(pauli)
    half = g2_half_half_rep()
    G = half.group
    w_h, _ = factor_system_of(half)
    phis_p = {K.labels[a]: phi(w_p, a) for a in K.elements}
    central = sorted(center(G).members)
    phis_h = {G.labels[a]: phi(w_h, a) for a in central}
    triv_K, triv_G = trivial_factor_system(K), trivial_factor_system(G)
    rep.results.update({
        "pauli_factor_system": factor_system_to_json(w_p),
        "pauli_factor_table": format_factor_table(w_p),
        "half_half_factor_system": factor_system_to_json(w_h),
        "phi_pauli": phis_p,
        "phi_half_half_center": phis_h,
        "certificate_pauli": K.labels[nontriviality_certificate(w_p)],
        "certificate_half_half": G.labels[nontriviality_certificate(w_h)],
    })
    tol = cfg.tolerances["exact"]
    worst = max(abs(v) for k, v in phis_p.items() if k != "e")
    rep.check("phi_Pauli = 0 off the identity", worst < tol, worst, tol, 2)
    worst = max(abs(v) for k, v in phis_h.items() if k != "e")
    rep.check("phi_(1/2x1/2) = 0 on nontrivial central elements", worst < tol, worst, tol, 2)
    dev = max(max(abs(phi(triv_K, a) - K.order) for a in K.elements),
              max(abs(phi(triv_G, a) - G.order) for a in G.elements))
    rep.check("phi_trivial = |G|", dev < tol, dev, tol, 2)
    eq = are_equivalent(w_p, triv_K)
    rep.check("Pauli cocycle not equivalent to trivial", not eq, eq, False, 2)
    rng = np.random.default_rng(cfg.seed)
    beta = GaugeFunction.random(K.order, rng, lattice=2 * K.order)
    eq2 = are_equivalent(w_p, gauge_transform(w_p, beta))
    rep.check("Pauli cocycle equivalent to a random gauge transform of itself", eq2, eq2, True, 2)
    dt = time.perf_counter() - t0
    rep.check_runtime("cohomology checks under 1 s", dt, 1.0, 2)
    d_p, d_h = commutant_dimension(pauli), commutant_dimension(half)
    d_red = commutant_dimension(direct_sum(pauli, pauli))
    rep.results.update({"commutant_dims": {"pauli": d_p, "half_half": d_h, "pauli+pauli": d_red}})
    rep.check("Pauli rep irreducible", d_p == 1, d_p, 1, 3)
    rep.check("1/2x1/2 rep irreducible", d_h == 1, d_h, 1, 3)
    rep.check("reducible control has commutant >= 2", d_red >= 2, d_red, ">= 2", 3)


def _scenario_gates(cfg: ExperimentConfig, rep: Report):
    from .gatechan import check_projector_algebra, fixed_space_dimension, gate_table, gate_table_to_json
    from .groups import characters
    from .mps import (aklt_tensor, character_states, cluster_tensor, equal_up_to_character_phases,
                      from_fixed_points, tensor_to_json, theorem_residual)
    from .projrep import PAULI
    from .symmetry import g2_half_half_rep, klein_pauli_rep
    t0 = time.perf_counter()
    reps = {"pauli": klein_pauli_rep(), "half_half": g2_half_half_rep()}
    tol, gtol = cfg.tolerances["exact"], cfg.tolerances["gate"]
    for name, r in reps.items():
        alg = check_projector_algebra(r, tol=tol)
        rep.check(f"{name}: Gamma_chi Gamma_phi = delta Gamma_chi", alg.passed, alg.max_residual, tol, 4)
        mult = max(fixed_space_dimension(r, c) for c in characters(r.group))
        rep.check(f"{name}: fixed-point multiplicity <= 1", mult <= 1, mult, 1, 4)
    rep.check_runtime("channel checks under 5 s", time.perf_counter() - t0, 5.0, 4)
    tables = {}
    for name, r in reps.items():
        t = gate_table(r)
        tables[name] = gate_table_to_json(t)
        res = t.group_law_residual()
        rep.check(f"{name}: W_chi W_phi = alpha W_chi.phi", res < gtol, res, gtol, 5)
        dev = max(abs(abs(a) - 1) for a in t.alpha.values())
        rep.check(f"{name}: |alpha| = 1", dev < gtol, dev, gtol, 5)
        rep.check(f"{name}: gate table faithful", t.faithful(), t.faithful(), True, 5)
        if name == "pauli":
            worst = 0.0
            for k, W in t.entries.items():
                label = t.characters[k].label
                P = PAULI["e" if label == "chi_1" else label[-1]]
                worst = max(worst, 1 - abs(np.trace(P.conj().T @ W)) / 2)
            rep.check("Pauli fixed points are Pauli matrices up to phase", worst < gtol, worst, gtol, 5)
    rep.results["gate_tables"] = tables
    tensors = {}
    for A in (aklt_tensor(), cluster_tensor()):
        tensors[A.label] = tensor_to_json(A)
        th = theorem_residual(A)
        worst = max(th.values())
        rep.check(f"{A.label}: A[chi] fixed by Gamma_chi ({len(th)} characters)", worst < tol, worst, tol, 6)
        t = gate_table(A.v_rep)
        B = from_fixed_points(t, character_states(A.u_rep))
        ok = equal_up_to_character_phases(A, B)
        rep.check(f"{A.label}: from_fixed_points round trip", ok, ok, True, 6)
    rep.results["tensors"] = tensors


def _target_pi(axis) -> np.ndarray:
    from .spin import unit
    from .universality import pi_rotation
    return pi_rotation(unit(axis)).matrix


def _holonomy_payload(res, target) -> dict:
    out = res.to_json(target)
    out["gate"] = _matrix(res.logical_unitary)
    return out


def _custom_schedule(cfg: ExperimentConfig, rep: Report):
    from .chainsim import schedule_from_config, transport_holonomy
    try:
        doc = json.loads(Path(cfg.schedule).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read schedule file {cfg.schedule!r}: {exc}") from None
    sched = schedule_from_config(doc)
    res = transport_holonomy(sched, cfg.steps or 256, conv_tol=cfg.tolerances["convergence"])
    rep.results["run"] = _holonomy_payload(res, None)
    rep.profile = res.gap_profile
    sym = sched.symmetry_residual()
    rep.check("declared conserved operators commute with H(t)", sym < cfg.tolerances["symmetry"],
              sym, cfg.tolerances["symmetry"], 12)


def _scenario_elementary(cfg: ExperimentConfig, rep: Report):
    from .chainsim import elementary_gate_schedule, trace_fidelity, transport_holonomy
    if cfg.schedule:
        return _custom_schedule(cfg, rep)
    N, steps = cfg.n or 4, cfg.steps or 512
    betas = [cfg.beta] if cfg.beta is not None else [-1 / 3, 0.0, 0.5]
    target = _target_pi(cfg.axis)
    tol = cfg.tolerances["fidelity"]
    gates, runs = [], {}
    t0 = time.perf_counter()
    for b in betas:
        sched = elementary_gate_schedule(N, 0, b, cfg.axis)
        res = transport_holonomy(sched, steps, conv_tol=cfg.tolerances["convergence"])
        gates.append(res.logical_unitary)
        runs[f"{b:.6g}"] = _holonomy_payload(res, target)
        f = res.fidelity(target)
        rep.check(f"elementary gate, beta={b:.4g}: pi-rotation about {cfg.axis}", f >= 1 - tol, f, 1 - tol, 7)
        sym = sched.symmetry_residual()
        rep.check(f"elementary schedule, beta={b:.4g}: symmetry preserved", sym < cfg.tolerances["symmetry"],
                  sym, cfg.tolerances["symmetry"], 12)
        if rep.profile is None:
            rep.profile = res.gap_profile
    worst = min((trace_fidelity(a, b) for a in gates for b in gates), default=1.0)
    rep.check("gates agree across beta", worst >= 1 - tol, worst, 1 - tol, 7)
    dt = time.perf_counter() - t0
    rep.check_runtime("elementary runs under 2 min", dt, 120.0, 7)
    rep.results["runs"] = runs


def _scenario_transistor(cfg: ExperimentConfig, rep: Report):
    from .chainsim import gap_profile, transistor_schedule, transport_holonomy
    N, steps = cfg.n or 4, cfg.steps or 512
    beta = -1 / 3 if cfg.beta is None else cfg.beta
    tol = cfg.tolerances["holonomy"]
    sched = transistor_schedule(N, beta, cfg.axis)
    res = transport_holonomy(sched, steps, conv_tol=cfg.tolerances["convergence"])
    W = _target_pi(cfg.axis)
    WN = np.linalg.matrix_power(W, N)
    rep.results["run"] = _holonomy_payload(res, W)
    rep.results["fidelity_vs_W_chi_power_N"] = res.fidelity(WN)
    f = res.fidelity(WN)
    rep.check(f"transistor gate equals W_chi^N for the N-site field state (N={N})", f >= 1 - tol, f, 1 - tol, 9)
    f1 = res.fidelity(W)
    rep.check(f"transistor gate equals the elementary W_chi (N={N})", f1 >= 1 - tol, f1, 1 - tol, 9)
    sym = sched.symmetry_residual()
    rep.check("transistor schedule: symmetry preserved", sym < cfg.tolerances["symmetry"], sym,
              cfg.tolerances["symmetry"], 12)
    prof = gap_profile(sched, cfg.samples)
    prof_next = gap_profile(transistor_schedule(N + 1, beta, cfg.axis), cfg.samples)
    g0, g1 = min(g for _, g in prof), min(g for _, g in prof_next)
    rep.profile = prof
    rep.results["min_gap"] = {str(N): g0, str(N + 1): g1}
    rep.check("transistor minimum gap positive", g0 > 0, g0, "> 0", 9)
    rep.check(f"minimum gap decreases from N={N} to N={N + 1}", g1 < g0, [g0, g1], "decreasing", 9)


def _scenario_holonomy(cfg: ExperimentConfig, rep: Report):
    from .chainsim import elementary_gate_schedule, single_qubit_holonomy_schedule, transport_holonomy
    from .spin import unit
    N, steps = cfg.n or 4, cfg.steps or 512
    beta = -1 / 3 if cfg.beta is None else cfg.beta
    tol = cfg.tolerances["holonomy"]
    sched = single_qubit_holonomy_schedule(N, beta, cfg.axis, cfg.axis2)
    res = transport_holonomy(sched, steps, conv_tol=cfg.tolerances["convergence"])
    target = _target_pi(np.cross(unit(cfg.axis), unit(cfg.axis2)))
    rep.results["run"] = _holonomy_payload(res, target)
    rep.profile = res.gap_profile
    f = res.fidelity(target)
    rep.check(f"decouple({cfg.axis})+rotate+recouple({cfg.axis2}) = pi-rotation about axis x axis2",
              f >= 1 - tol, f, 1 - tol, 8)
    sym = sched.symmetry_residual()
    rep.check("holonomy schedule: symmetry preserved", sym < cfg.tolerances["symmetry"], sym,
              cfg.tolerances["symmetry"], 12)
    dec = elementary_gate_schedule(N, 0, beta, cfg.axis)
    fwd = transport_holonomy(dec, steps).logical_unitary
    back = transport_holonomy(dec.reversed(), steps).logical_unitary
    inv = abs(np.trace(back @ fwd)) / 2
    rep.check("recoupling inverts decoupling", inv >= 1 - tol, inv, 1 - tol, 8)


def _scenario_two_qubit(cfg: ExperimentConfig, rep: Report):
    from .chainsim import transport_holonomy, two_qubit_coupling, two_qubit_gate_schedule, xi_state
    from .spin import pi_rotation, rotation
    xi = xi_state()
    R = lambda a: pi_rotation(1, a)  # noqa: E731
    I3 = np.eye(3)
    table = {
        "(sqrtRz,Rx)": (np.kron(rotation(1, "z", np.pi / 2), R("x")), 1j),
        "(Ru,Ru)": (np.kron(R("u"), R("u")), 1),
        "(Rv,Rv)": (np.kron(R("v"), R("v")), 1),
        "(Rz,1)": (np.kron(R("z"), I3), -1),
        "(1,Rz)": (np.kron(I3, R("z")), -1),
    }
    tol = cfg.tolerances["exact"]
    measured = {}
    for name, (U, expected) in table.items():
        ev = np.vdot(xi, U @ xi)
        measured[name] = ev
        err = max(abs(ev - expected), float(np.linalg.norm(U @ xi - ev * xi)))
        rep.check(f"|xi> eigenvalue under {name}", err < tol, ev, expected, 10)
    rep.results["xi_eigenvalues"] = measured
    w, v = np.linalg.eigh(two_qubit_coupling().matrix)
    deg = int(np.sum(w - w[0] < 1e-9))
    rep.check("W^AB ground space one-dimensional", deg == 1, deg, 1, 10)
    ov = abs(np.vdot(v[:, 0], xi))
    rep.check("W^AB ground state is |xi>", ov > 1 - tol, ov, 1 - tol, 10)
    N, steps = cfg.n or 3, cfg.steps or 256
    beta = -1 / 3 if cfg.beta is None else cfg.beta
    t0 = time.perf_counter()
    sched = two_qubit_gate_schedule(N, beta)
    res = transport_holonomy(sched, steps, conv_tol=cfg.tolerances["convergence"])
    X = np.array([[0, 1], [1, 0]])
    target = np.kron(X, X) @ np.diag([1, 1, 1, -1])
    rep.results["run"] = _holonomy_payload(res, target)
    rep.profile = res.gap_profile
    f = res.fidelity(target)
    t2 = 1 - cfg.tolerances["two_qubit"]
    rep.check(f"two-chain gate (N={N}, dim {sched.layout.total_dim}) = (X x X) CZ", f >= t2, f, t2, 10)
    times = np.linspace(0, 1, 11)
    sym = sched.symmetry_residual(times)
    rep.check("two-qubit schedule: symmetry preserved", sym < cfg.tolerances["symmetry"], sym,
              cfg.tolerances["symmetry"], 12)
    dt = time.perf_counter() - t0
    rep.check_runtime("two-chain run under 15 min", dt, 900.0, 10)


def _scenario_universality(cfg: ExperimentConfig, rep: Report):
    from .universality import (compose_pi_rotations, embedding_gate_set, embeddings_from_config,
                               gate_fidelity, reference_embeddings, pi_rotation)
    tol = cfg.tolerances["exact"]
    if cfg.embeddings and cfg.embeddings != "reference":
        try:
            doc = json.loads(Path(cfg.embeddings).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read embeddings file {cfg.embeddings!r}: {exc}") from None
        embs = embeddings_from_config(doc)
        report = embedding_gate_set(embs, tol)
        rep.results["report"] = report.to_json()
        for g, ok in report.reached.items():
            rep.check(f"{g} reached", ok, report.residuals.get(g), tol, 11)
        return
    embs = reference_embeddings()
    full = embedding_gate_set(embs, tol)
    three = embedding_gate_set([embs[0], embs[2], embs[3]], tol)
    rep.results["four_embeddings"] = full.to_json()
    rep.results["three_embeddings"] = three.to_json()
    for label, r in (("four embeddings", full), ("three embeddings", three)):
        for g, ok in r.reached.items():
            rep.check(f"{label}: {g} reached", ok, r.residuals.get(g), tol, 11)
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(1000):
        a, b = rng.normal(size=(2, 3))
        a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        c = compose_pi_rotations(a, b)
        worst = max(worst, 1 - gate_fidelity(pi_rotation(b).matrix @ pi_rotation(a).matrix, c.matrix))
    rep.check("composition formula matches SU(2) products (1000 pairs)", worst < tol, worst, tol, 11)


_RUNNERS = {
    "groups": _scenario_groups,
    "reps": _scenario_reps,
    "gates": _scenario_gates,
    "elementary": _scenario_elementary,
    "transistor": _scenario_transistor,
    "holonomy": _scenario_holonomy,
    "two_qubit": _scenario_two_qubit,
    "universality": _scenario_universality,
}


def _config_echo(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d.pop("out")
    return d


def run(config: ExperimentConfig) -> Report:
    """Run one scenario (or all of them) and collect its assertions."""
    cfg = config.validate()
    t0 = time.perf_counter()
    rep = Report(cfg.scenario, _config_echo(cfg))
    if cfg.scenario == "verify_all":
        names = [s for s in SCENARIOS if s != "verify_all"]

        def sub(name):
            # each scenario runs at its own acceptance parameters
            return run(ExperimentConfig(scenario=name, samples=cfg.samples, seed=cfg.seed,
                                        tolerances=dict(cfg.tolerances)))

        if cfg.parallel:
            with ThreadPoolExecutor() as ex:
                subs = list(ex.map(sub, names))
        else:
            subs = [sub(n) for n in names]
        for s in subs:
            rep.results[s.scenario] = s.results
            rep.assertions.extend(s.assertions)
            rep.timings.update({f"{s.scenario}: {k}": v for k, v in s.timings.items()})
        rep.assertions.sort(key=lambda a: (a.criterion or 99))
    else:
        try:
            _RUNNERS[cfg.scenario](cfg, rep)
        except SpaqtError as exc:
            raise type(exc)(f"[{cfg.scenario}] {exc}") from exc
    rep.wall_time = time.perf_counter() - t0
    return rep


def emit(report: Report, fmt: str = "json") -> str:
    """Serialise a report: JSON (full), CSV (gap profile ``t,gap``) or plain text."""
    if fmt == "json":
        doc = _jsonable(report.payload())
        doc["wall_time"] = {"total": report.wall_time, **report.timings}
        if report.profile is not None:
            doc["gap_profile"] = [[t, g] for t, g in report.profile]
        return json.dumps(doc, indent=2, sort_keys=True)
    if fmt == "csv":
        if report.profile is None:
            raise UnsupportedFormat(f"scenario {report.scenario!r} has no gap profile to write as CSV")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "gap"])
        for t, g in report.profile:
            w.writerow([f"{t:.10g}", f"{g:.12g}"])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"scenario: {report.scenario}"]
        if "pauli_factor_table" in report.results:
            lines += ["", report.results["pauli_factor_table"], ""]
        for a in report.assertions:
            tag = "PASS" if a.passed else "FAIL"
            crit = f"[{a.criterion}] " if a.criterion else ""
            lines.append(f"{tag} {crit}{a.name}: measured={_jsonable(a.measured)} tol={_jsonable(a.tolerance)}")
        lines.append(f"wall time {report.wall_time:.2f} s")
        return "\n".join(lines) + "\n"
    raise UnsupportedFormat(f"unsupported format {fmt!r}; use json, csv or text")


# ---------------------------------------------------------------------------
# argument handling


def load_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spaqt", description=__doc__.split("\n\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("scenario_pos", nargs="?", metavar="SCENARIO", choices=SCENARIOS,
                   help="scenario to run (same as --scenario)")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--config", help="key = value file; command-line flags take precedence")
    p.add_argument("--n", type=int, help="spin-1 sites per chain")
    p.add_argument("--beta", type=float, help="biquadratic coupling")
    p.add_argument("--axis", help="field axis (x, y, z, u, v, mu, nu)")
    p.add_argument("--axis2", help="second field axis for the holonomy scenario")
    p.add_argument("--steps", type=int, help="transport steps (even)")
    p.add_argument("--samples", type=int, help="gap-profile samples")
    p.add_argument("--seed", type=int, help="seed for randomised checks")
    p.add_argument("--embeddings", help="JSON file of embeddings, or 'reference'")
    p.add_argument("--schedule", help="JSON schedule definition (elementary scenario)")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--parallel", action="store_true", default=None)
    for k in DEFAULT_TOLERANCES:
        p.add_argument(f"--tol-{k.replace('_', '-')}", type=float, dest=f"tol_{k}")
    return p


_TYPES = {"n": int, "beta": float, "steps": int, "samples": int, "seed": int,
          "parallel": lambda s: str(s).lower() in ("1", "true", "yes", "on")}


def config_from_args(argv=None) -> ExperimentConfig:
    args = _parser().parse_args(argv)
    values: dict = {}
    if args.config:
        for k, v in load_config_file(args.config).items():
            try:
                values[k] = _TYPES.get(k, str)(v)
            except ValueError:
                raise ConfigError(f"config key {k!r}: cannot parse {v!r}") from None
    for k, v in vars(args).items():
        if v is not None and k not in ("config", "scenario_pos"):
            values[k] = v
    if args.scenario_pos:
        values["scenario"] = args.scenario_pos
    tols = dict(DEFAULT_TOLERANCES)
    for k in list(values):
        if k.startswith("tol_"):
            name = k[4:]
            if name not in tols:
                raise ConfigError(f"unknown tolerance {name!r}; known: {sorted(tols)}")
            tols[name] = float(values.pop(k))
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(tolerances=tols, **values).validate()


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        report = run(cfg)
        text = emit(report, cfg.format)
    except (ConfigError, UnsupportedFormat) as exc:
        print(f"spaqt: error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
