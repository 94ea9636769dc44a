import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import loop_gamma
from spaqt.errors import DegenerateFixedSpace, DimensionMismatch
from spaqt.gatechan import (apply_gamma, check_projector_algebra, fixed_point, fixed_space_dimension,
                            gate_table, gate_table_to_json, intertwining_residual, superoperator)
from spaqt.groups import Character, build_named_group, character_by_kernel, characters
from spaqt.mps import aklt_tensor, character_states, cluster_tensor, project_physical
from spaqt.projrep import PAULI, ProjectiveRep, direct_sum, trivial_rep
from spaqt.symmetry import g2_half_half_rep, klein_pauli_rep


@pytest.fixture(scope="module")
def pauli():
    return klein_pauli_rep()


@pytest.fixture(scope="module")
def half():
    return g2_half_half_rep()


def up_to_phase(A, B, tol=1e-9):
    c = np.vdot(B, A) / np.vdot(B, B)
    return abs(abs(c) - 1) < tol and np.linalg.norm(A - c * B) < tol


def test_apply_gamma_examples(pauli):
    K = pauli.group
    triv = characters(K)[0]
    assert np.allclose(apply_gamma(pauli, triv, PAULI["z"]), 0)
    assert np.allclose(apply_gamma(pauli, triv, np.eye(2)), np.eye(2))
    assert np.allclose(apply_gamma(pauli, character_by_kernel(K, "z"), PAULI["z"]), PAULI["z"])


def test_apply_gamma_dimension_check(pauli):
    with pytest.raises(DimensionMismatch):
        apply_gamma(pauli, characters(pauli.group)[0], np.eye(3))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 7), st.integers(0, 2 ** 31 - 1))
def test_apply_gamma_and_superoperator_match_loop(k, seed):
    half = g2_half_half_rep()
    chi = characters(half.group)[k]
    M = np.random.default_rng(seed).normal(size=(4, 4)) + 1j * np.random.default_rng(seed + 1).normal(size=(4, 4))
    ref = loop_gamma(half.matrices, chi.values, M)
    assert np.allclose(apply_gamma(half, chi, M), ref, atol=1e-12)
    assert np.allclose((superoperator(half, chi) @ M.reshape(-1)).reshape(4, 4), ref, atol=1e-12)


def test_pauli_fixed_points(pauli):
    K = pauli.group
    for m in "xyz":
        W = fixed_point(pauli, character_by_kernel(K, m))
        assert up_to_phase(W, PAULI[m])
    W1 = fixed_point(pauli, characters(K)[0])
    assert np.allclose(W1, np.eye(2))


def test_trivial_character_gives_identity(half):
    assert np.allclose(fixed_point(half, characters(half.group)[0]), np.eye(4))


def test_half_half_fixed_points_distinct(half):
    Ws = [fixed_point(half, c) for c in characters(half.group)]
    assert all(W is not None for W in Ws) and len(Ws) == 8
    for A, B in itertools.combinations(Ws, 2):
        assert abs(np.trace(A.conj().T @ B)) / 4 < 1 - 1e-6


def test_fixed_point_phase_gauge(half):
    for c in characters(half.group):
        W = fixed_point(half, c)
        k = np.argmax(np.round(np.abs(W.ravel()), 9))
        assert abs(W.ravel()[k].imag) < 1e-12 and W.ravel()[k].real > 0


def test_reducible_rep_rejected(pauli):
    with pytest.raises(DegenerateFixedSpace):
        fixed_point(direct_sum(pauli, pauli), characters(pauli.group)[0])


def test_missing_fixed_point_reported():
    # trivial 1-d rep of Z4: only the trivial character has a fixed point
    Z4 = build_named_group("Z4")
    t = gate_table(trivial_rep(Z4, 1))
    assert len(t.entries) == 1 and len(t.missing) == 3
    assert fixed_point(trivial_rep(Z4, 1), characters(Z4)[1]) is None


@pytest.mark.parametrize("name", ["pauli", "half"])
def test_gate_table_properties(name, pauli, half):
    rep = {"pauli": pauli, "half": half}[name]
    t = gate_table(rep)
    assert t.group_law_residual() < 1e-9
    assert t.intertwining_residual() < 1e-9
    assert all(abs(abs(a) - 1) < 1e-9 for a in t.alpha.values())
    assert t.faithful()
    for k, W in t.entries.items():
        assert np.allclose(W.conj().T @ W, np.eye(rep.dim), atol=1e-10)
        if not t.characters[k].is_trivial():
            assert abs(np.trace(W)) < rep.dim - 1e-6
    assert np.allclose(t.entries[0], np.eye(rep.dim))


def test_pauli_alpha_realises_anticommutation(pauli):
    t = gate_table(pauli)
    lab = {c.label: k for k, c in enumerate(t.characters)}
    x, z = lab["chi_x"], lab["chi_z"]
    # W_x W_z = alpha(x,z) W_y and W_z W_x = alpha(z,x) W_y with ratio -1
    assert t.alpha[x, z] / t.alpha[z, x] == pytest.approx(-1)


def test_cluster_gate_table_is_pauli():
    A = cluster_tensor()
    t = gate_table(A.v_rep)
    for k, W in t.entries.items():
        lab = t.characters[k].label
        P = PAULI["e" if lab == "chi_1" else lab[-1]]
        assert up_to_phase(W, P)


@pytest.mark.parametrize("name", ["pauli", "half"])
def test_projector_algebra(name, pauli, half):
    rep = {"pauli": pauli, "half": half}[name]
    r = check_projector_algebra(rep)
    assert r.passed and r.max_residual < (1e-12 if name == "pauli" else 1e-10)
    assert r.pairs_checked == len(characters(rep.group)) ** 2


def test_projector_algebra_trivial_group():
    G = build_named_group("Z2")
    triv = Character(G, np.ones(2))
    rep = trivial_rep(G, 2)
    r = check_projector_algebra(rep, [triv])
    assert r.passed
    S = superoperator(rep, triv)
    assert np.allclose(S @ S, S)


@pytest.mark.parametrize("name", ["pauli", "half"])
def test_fixed_space_at_most_one(name, pauli, half):
    rep = {"pauli": pauli, "half": half}[name]
    assert all(fixed_space_dimension(rep, c) <= 1 for c in characters(rep.group))


@pytest.mark.parametrize("A", [aklt_tensor(), cluster_tensor()], ids=lambda a: a.label)
def test_fixed_point_equals_projected_tensor(A):
    chars = characters(A.v_rep.group)
    for k, psi in character_states(A.u_rep, chars).items():
        W = fixed_point(A.v_rep, chars[k])
        assert up_to_phase(W, project_physical(A, psi))


def test_intertwining_residual_detects_wrong_gate(pauli):
    chi = character_by_kernel(pauli.group, "z")
    assert intertwining_residual(pauli, chi, PAULI["z"]) < 1e-12
    assert intertwining_residual(pauli, chi, PAULI["x"]) > 1


def test_gate_table_json(half):
    doc = json.loads(json.dumps(gate_table_to_json(gate_table(half))))
    assert len(doc["gates"]) == 8 and len(doc["alpha"]) == 64
    W = np.array(doc["gates"]["chi_1"])
    assert W.shape == (4, 4, 2)


def test_scrambled_rep_still_works(pauli, rng):
    # conjugating by a random unitary leaves the gate group intact
    Q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    rep = ProjectiveRep(pauli.group, Q @ pauli.matrices @ Q.conj().T)
    t = gate_table(rep)
    assert t.group_law_residual() < 1e-9 and t.faithful()
