import functools
import json

import numpy as np
import pytest
import scipy.sparse as sp

from oracles import schrodinger_gate
from spaqt.chainsim import (constant_schedule, edge_coupled_chain, elementary_gate_schedule,
                            gap_profile, ground_space, schedule_from_config,
                            single_qubit_holonomy_schedule, transistor_schedule,
                            transport_holonomy, two_qubit_gate_schedule)
from spaqt.chainsim.transport import logical_basis, phase_align, trace_fidelity
from spaqt.errors import DegeneracyChange, NoGap
from spaqt.gatechan import gate_table
from spaqt.projrep import PAULI
from spaqt.symmetry import klein_pauli_rep

I2 = np.eye(2)
X, Y, Z = PAULI["x"], PAULI["y"], PAULI["z"]
H = (X + Z) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1])


@functools.lru_cache(maxsize=None)
def elementary(N, beta, axis="z", j=0):
    return transport_holonomy(elementary_gate_schedule(N, j, beta, axis), steps=128)


def test_ground_space_dense_matches_sparse(rng):
    layout, terms = edge_coupled_chain(5)
    Hm = sum(t.embedded(layout) for t in terms)
    a = ground_space(Hm, dense_max=10 ** 6)
    b = ground_space(Hm, dense_max=0)
    assert a.degeneracy == b.degeneracy == 2
    assert a.gap == pytest.approx(b.gap, abs=1e-9)
    Pa, Pb = a.frame @ a.frame.conj().T, b.frame @ b.frame.conj().T
    assert np.abs(Pa - Pb).max() < 1e-8


def test_ground_space_no_gap():
    with pytest.raises(NoGap):
        ground_space(sp.identity(10, format="csr"))
    with pytest.raises(NoGap):
        ground_space(np.zeros((2, 2)))
    # a split far below the clustering tolerance counts as degenerate
    assert ground_space(np.diag([0, 1e-10, 1])).degeneracy == 2


def test_ground_space_cluster():
    g = ground_space(np.diag([0, 0, 0, 1.0, 2]))
    assert g.degeneracy == 3 and g.gap == pytest.approx(1)


def test_logical_basis_diagonalises_frame():
    s = constant_schedule(3)
    G = ground_space(s.hamiltonian(0)).frame
    B = logical_basis(s.logical_in, G)
    Zr = B.conj().T @ (s.logical_in.z_ops[0] @ B)
    Xr = B.conj().T @ (s.logical_in.x_ops[0] @ B)
    assert np.allclose(Zr, Z) and np.allclose(Xr, X)


def test_constant_schedule_is_identity():
    r = transport_holonomy(constant_schedule(3), steps=16)
    assert np.allclose(r.logical_unitary, I2, atol=1e-10)
    assert r.converged and r.degeneracy == 2


@pytest.mark.parametrize("beta", [-1 / 3, 0.0, 0.5])
def test_elementary_gate_sigma_z(beta):
    r = elementary(3, beta)
    assert r.fidelity(Z) > 1 - 1e-9
    assert r.frame_residual < 1e-10 and r.min_gap > 0.1


@pytest.mark.parametrize("axis,target", [("x", X), ("y", Y), ("mu", H)])
def test_elementary_gate_other_axes(axis, target):
    assert elementary(3, 0.0, axis).fidelity(target) > 1 - 1e-9


def test_elementary_gate_at_later_boundary():
    # moving the boundary from 1 to 2 after site 0 is frozen in a field
    assert elementary(4, 0.0, "z", 1).fidelity(Z) > 1 - 1e-9


def test_reverse_schedule_inverts_gate():
    s = elementary_gate_schedule(3, 0, 0.0, "x")
    f = transport_holonomy(s, 64).logical_unitary
    b = transport_holonomy(s.reversed(), 64).logical_unitary
    assert trace_fidelity(b @ f, I2) > 1 - 1e-9


def test_holonomy_z_to_x_is_sigma_y():
    r = transport_holonomy(single_qubit_holonomy_schedule(3, 0.0, "z", "x"), steps=192)
    assert r.fidelity(Y) > 1 - 1e-6
    assert r.min_gap > 0.05


def test_holonomy_mu_to_y_gives_conserved_axis():
    r = transport_holonomy(single_qubit_holonomy_schedule(3, 0.0, "mu", "y"), steps=192)
    n = np.cross([1, 0, 1], [0, 1, 0]) / np.sqrt(2)
    target = n[0] * X + n[1] * Y + n[2] * Z
    assert r.fidelity(target) > 1 - 1e-6


@pytest.mark.parametrize("N", [3, 4, 5])
def test_transistor_gate_is_power_of_sigma_z(N):
    r = transport_holonomy(transistor_schedule(N), steps=128)
    target = np.linalg.matrix_power(Z, N)
    assert r.fidelity(target) > 1 - 1e-9


def test_transistor_gap_shrinks_with_length():
    g = [min(x for _, x in gap_profile(transistor_schedule(N), samples=21)) for N in (3, 4)]
    assert 0 < g[1] < g[0]


def test_gap_profile_shape():
    prof = gap_profile(elementary_gate_schedule(3), samples=5)
    assert [t for t, _ in prof] == pytest.approx([0, 0.25, 0.5, 0.75, 1])
    assert all(g > 0 for _, g in prof)
    assert prof == gap_profile(elementary_gate_schedule(3), samples=5, workers=2)


def test_two_qubit_gate():
    r = transport_holonomy(two_qubit_gate_schedule(2), steps=128)
    assert r.degeneracy == 4
    assert r.fidelity(np.kron(X, X) @ CZ) > 1 - 1e-6


@pytest.mark.parametrize("axis", ["z", "x"])
def test_transport_matches_schrodinger_evolution(axis):
    s = elementary_gate_schedule(2, 0, 0.0, axis)
    r = transport_holonomy(s, steps=128)
    Bi = logical_basis(s.logical_in, ground_space(s.hamiltonian(0)).frame)
    Bo = logical_basis(s.logical_out, ground_space(s.hamiltonian(1)).frame)
    U = schrodinger_gate(s, 200.0, 1000, Bi, Bo)
    assert trace_fidelity(U, r.logical_unitary) > 1 - 1e-6


def test_transport_gate_intertwines_like_gate_table():
    # the chain's sigma_z gate is the Pauli gate table entry for chi_z
    t = gate_table(klein_pauli_rep())
    k = next(i for i, c in enumerate(t.characters) if c.label == "chi_z")
    assert trace_fidelity(elementary(3, 0.0).logical_unitary, t.entries[k]) > 1 - 1e-9


def test_level_crossing_detected():
    # a linear crossfade of (S.z)^2 into (S.x)^2 on a decoupled site passes
    # through (Sx^2 + Sz^2)/2, whose ground level is doubly degenerate
    doc = {"N": 2, "terms": [
        {"term": "H0,1", "ramp": "down", "interval": [0, 1 / 3]},
        {"term": "edge"},
        {"term": "F0:z", "ramps": [{"ramp": "up", "interval": [0, 1 / 3]},
                                   {"ramp": "linear_down", "interval": [1 / 3, 2 / 3]}]},
        {"term": "F0:x", "ramp": "linear_up", "interval": [1 / 3, 2 / 3]}],
        "logical_in": [2], "logical_out": [2]}
    with pytest.raises(DegeneracyChange):
        transport_holonomy(schedule_from_config(doc), steps=16)


def test_odd_steps_rejected():
    with pytest.raises(ValueError):
        transport_holonomy(constant_schedule(2), steps=7)


def test_phase_align():
    U = np.exp(0.7j) * Z
    assert np.allclose(phase_align(U, Z), Z)


def test_result_json():
    doc = json.loads(json.dumps(elementary(3, 0.0).to_json(Z)))
    assert doc["fidelity_vs_target"] > 1 - 1e-9 and doc["converged"]
    assert np.array(doc["gate"]).shape == (2, 2, 2)
