import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (brute_coboundary, cocycle_defect, commutant_dim_by_characters,
                     ratio_factor_system)
from spaqt.errors import NotProjective, NotRootOfUnity
from spaqt.groups import build_named_group, center
from spaqt.projrep import (PAULI, FactorSystem, GaugeFunction, ProjectiveRep, are_equivalent,
                           commutant_dimension, direct_sum, factor_system_of, factor_system_to_json,
                           format_factor_table, gauge_transform, is_irreducible,
                           nontriviality_certificate, phase_exponents, phi, trivial_factor_system,
                           trivial_rep)
from spaqt.symmetry import g2_half_half_rep, g2_spin1_rep, klein_pauli_rep, klein_spin1_rep


@pytest.fixture(scope="module")
def pauli():
    return klein_pauli_rep()


@pytest.fixture(scope="module")
def half():
    return g2_half_half_rep()


def builtin_reps():
    return [klein_pauli_rep(), g2_half_half_rep(), klein_spin1_rep(), g2_spin1_rep(),
            trivial_rep(build_named_group("Z4"), 2)]


def test_pauli_factor_table(pauli):
    w, resid = factor_system_of(pauli)
    K = pauli.group
    X, Y, Z = (K.index(m) for m in "xyz")
    assert resid < 1e-12
    expected = {(X, Y): 1j, (Y, X): -1j, (Z, X): 1j, (X, Z): -1j, (Y, Z): 1j, (Z, Y): -1j}
    for (g, h), val in expected.items():
        assert w(g, h) == pytest.approx(val, abs=1e-12)
    for g in K.elements:
        assert w(g, g) == pytest.approx(1, abs=1e-12)


def test_trivial_rep_has_trivial_cocycle():
    G = build_named_group("D2_semidirect_Z4")
    w, _ = factor_system_of(trivial_rep(G, 3))
    assert np.allclose(w.omega, 1)


@pytest.mark.parametrize("rep", builtin_reps(), ids=lambda r: r.group.name)
def test_factor_system_matches_ratio_oracle_and_is_cocycle(rep):
    w, _ = factor_system_of(rep)
    ref = ratio_factor_system(list(rep.matrices), rep.group.table.tolist())
    assert np.allclose(w.omega, ref, atol=1e-12)
    assert cocycle_defect(w.omega, rep.group.table.tolist()) < 1e-10
    assert w.cocycle_residual() < 1e-10
    assert w.modulus_residual() < 1e-12
    assert rep.unitarity_residual() < 1e-10


def test_half_half_cocycle_exhaustive(half):
    # all 16^3 triples
    w, _ = factor_system_of(half)
    assert cocycle_defect(w.omega, half.group.table.tolist()) < 1e-10


def test_non_projective_rejected(pauli):
    bad = pauli.matrices.copy()
    bad[1] = np.diag([1, 1j])
    with pytest.raises(NotProjective):
        factor_system_of(ProjectiveRep(pauli.group, bad))


def test_phi_values(pauli, half):
    w, _ = factor_system_of(pauli)
    for a in pauli.group.elements[1:]:
        assert abs(phi(w, a)) < 1e-12
    G = half.group
    wh, _ = factor_system_of(half)
    for a in center(G).members - {G.identity}:
        assert abs(phi(wh, a)) < 1e-12
    for H in (pauli.group, G):
        triv = trivial_factor_system(H)
        assert all(phi(triv, a) == H.order for a in H.elements)


def test_certificates(pauli, half):
    w, _ = factor_system_of(pauli)
    assert nontriviality_certificate(w) is not None
    wh, _ = factor_system_of(half)
    a = nontriviality_certificate(wh)
    assert a in center(half.group).members and a != half.group.identity
    assert nontriviality_certificate(trivial_factor_system(half.group)) is None


def test_gauge_transform_identity_and_coboundary(pauli, rng):
    w, _ = factor_system_of(pauli)
    one = GaugeFunction(np.ones(4))
    assert np.allclose(gauge_transform(w, one).omega, w.omega)
    triv = trivial_factor_system(pauli.group)
    cob = gauge_transform(triv, GaugeFunction.random(4, rng))
    assert cob.cocycle_residual() < 1e-12
    assert all(abs(phi(cob, a) - 4) < 1e-9 for a in range(4))


@pytest.mark.parametrize("rep", builtin_reps(), ids=lambda r: r.group.name)
def test_rephasing_equals_gauge_transform(rep, rng):
    beta = GaugeFunction.random(rep.group.order, rng)
    w, _ = factor_system_of(rep)
    w2, _ = factor_system_of(rep.rephase(beta))
    assert np.allclose(w2.omega, gauge_transform(w, beta).omega, atol=1e-12)


@pytest.mark.parametrize("rep", builtin_reps(), ids=lambda r: r.group.name)
def test_phi_gauge_invariant_on_center(rep, rng):
    w, _ = factor_system_of(rep)
    for _ in range(3):
        w2 = gauge_transform(w, GaugeFunction.random(rep.group.order, rng))
        for a in center(rep.group).members:
            assert abs(phi(w, a) - phi(w2, a)) < 1e-9


def test_are_equivalent_examples(pauli, rng):
    w, _ = factor_system_of(pauli)
    assert are_equivalent(w, w)
    assert not are_equivalent(w, trivial_factor_system(pauli.group))
    for _ in range(5):
        beta = GaugeFunction.random(4, rng, lattice=8)
        assert are_equivalent(w, gauge_transform(w, beta))


def test_are_equivalent_rejects_off_lattice(pauli):
    w, _ = factor_system_of(pauli)
    odd = GaugeFunction(np.exp(1j * np.array([0, 0.1, 0.2, 0.3])))
    with pytest.raises(NotRootOfUnity):
        are_equivalent(w, gauge_transform(w, odd))


def test_half_half_not_trivial_and_not_pauli_squared(half):
    wh, _ = factor_system_of(half)
    G = half.group
    assert not are_equivalent(wh, trivial_factor_system(G))
    assert are_equivalent(wh, wh)


def _random_klein_cocycle(draw_bits, base):
    beta = np.exp(2j * np.pi * np.array(draw_bits) / 8)
    beta[0] = 1
    return gauge_transform(base, GaugeFunction(beta))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=4, max_size=4), st.lists(st.integers(0, 7), min_size=4, max_size=4),
       st.booleans(), st.booleans())
def test_are_equivalent_agrees_with_brute_force(b1, b2, t1, t2):
    pauli = klein_pauli_rep()
    K = pauli.group
    wp, _ = factor_system_of(pauli)
    triv = trivial_factor_system(K)
    w1 = _random_klein_cocycle(b1, wp if t1 else triv)
    w2 = _random_klein_cocycle(b2, wp if t2 else triv)
    rho = w1.omega * w2.omega.conj()
    expected = brute_coboundary(rho, K.table.tolist(), 16)
    assert are_equivalent(w1, w2) == expected == (t1 == t2)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=16, max_size=16),
       st.lists(st.integers(0, 31), min_size=16, max_size=16))
def test_are_equivalent_is_an_equivalence_on_g2(b1, b2):
    half = g2_half_half_rep()
    G = half.group
    wh, _ = factor_system_of(half)
    triv = trivial_factor_system(G)
    gauge = lambda b: GaugeFunction(np.exp(2j * np.pi * np.array(b) / 32))  # noqa: E731
    x, y, z = gauge_transform(wh, gauge(b1)), gauge_transform(wh, gauge(b2)), gauge_transform(triv, gauge(b1))
    assert are_equivalent(x, x)
    assert are_equivalent(x, y) and are_equivalent(y, x)
    assert not are_equivalent(x, z) and not are_equivalent(z, y)


def test_irreducibility(pauli, half):
    assert is_irreducible(pauli) and is_irreducible(half)
    assert not is_irreducible(direct_sum(pauli, pauli))
    assert commutant_dimension(direct_sum(pauli, pauli)) == 4


@pytest.mark.parametrize("rep", builtin_reps() + [direct_sum(klein_pauli_rep(), klein_pauli_rep())],
                         ids=lambda r: f"{r.group.name}-{r.dim}")
def test_commutant_dimension_matches_character_formula(rep):
    assert commutant_dimension(rep) == commutant_dim_by_characters(rep.matrices)


def test_phase_exponents():
    vals = np.exp(2j * np.pi * np.array([0, 3, 5]) / 8)
    assert phase_exponents(vals, 8).tolist() == [0, 3, 5]
    with pytest.raises(NotRootOfUnity):
        phase_exponents(np.exp(1j * np.array([0.3])), 8)


def test_factor_system_json_and_table(pauli):
    w, _ = factor_system_of(pauli)
    doc = json.loads(json.dumps(factor_system_to_json(w)))
    assert doc["root_order"] == 4
    M = doc["root_order"]
    rebuilt = np.exp(2j * np.pi * np.array(doc["exponents"]) / M)
    assert np.allclose(rebuilt, w.omega)
    text = format_factor_table(w)
    assert text.splitlines()[0].split("|")[0].strip() == "ω"
    assert " i" in text and "-i" in text


def test_projective_rep_shape_check(pauli):
    with pytest.raises(ValueError):
        ProjectiveRep(pauli.group, np.stack([PAULI["e"]] * 3))


def test_invalid_gauge_function():
    with pytest.raises(ValueError):
        GaugeFunction(np.array([1.0, 2.0]))


def test_factor_system_call(pauli):
    w, _ = factor_system_of(pauli)
    assert isinstance(w, FactorSystem) and w(0, 0) == pytest.approx(1)
