import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_center, brute_derived, is_homomorphism
from spaqt.errors import UnknownGroupName
from spaqt.groups import (NAMED_GROUPS, FiniteGroup, abelianization, build_named_group, center,
                          character_by_kernel, characters, derived_subgroup, direct_product,
                          find_isomorphism, group_from_json, group_from_presentation, group_to_json,
                          is_isomorphic, semidirect_product, subgroup_generated, todd_coxeter)
from spaqt.symmetry import g2_group

ALL = sorted(NAMED_GROUPS)


@pytest.fixture(scope="module")
def groups():
    return {name: build_named_group(name) for name in ALL}


def klein_swap_semidirect():
    """(Z2 x Z2) x| Z4 with the generator of Z4 swapping x and y."""
    K, Z4 = build_named_group("Z2xZ2"), build_named_group("Z4")
    swap = {K.index(l): K.index(m) for l, m in zip("exyz", "eyxz")}
    return semidirect_product(K, Z4, lambda h, n: swap[n] if h % 2 else n)


@pytest.mark.parametrize("name", ALL)
def test_named_groups_satisfy_group_axioms(groups, name):
    G = groups[name]
    G.check()
    t = G.table
    for a in G.elements:
        assert G.identity in t[a]
        assert G.mul(a, G.inv(a)) == G.identity


def test_unknown_group_name():
    with pytest.raises(UnknownGroupName):
        build_named_group("S3")


def test_klein_elements_self_inverse(groups):
    K = groups["Z2xZ2"]
    assert K.order == 4
    assert all(K.mul(a, a) == K.identity for a in K.elements)


def test_z4_generator(groups):
    Z = groups["Z4"]
    a = Z.index("a")
    assert Z.power(a, 4) == Z.identity and Z.power(a, 2) != Z.identity


def test_d2_z4_order(groups):
    assert groups["D2_semidirect_Z4"].order == 16


@pytest.mark.parametrize("name", ALL)
def test_center_matches_brute_force(groups, name):
    G = groups[name]
    assert set(center(G).members) == brute_center(G.table.tolist())


@pytest.mark.parametrize("name", ALL)
def test_derived_matches_brute_force(groups, name):
    G = groups[name]
    assert set(derived_subgroup(G).members) == brute_derived(G.table.tolist(), G.identity)


def test_center_of_d2_z4_is_klein(groups):
    G = groups["D2_semidirect_Z4"]
    Z = center(G)
    assert Z.is_subgroup() and Z.order == 4
    assert is_isomorphic(Z.as_group(), groups["Z2xZ2"])
    # {1, a^2, (ab)^2, (ab)^2 a^2}
    a, b = G.index("α"), G.index("β")
    ab = G.mul(a, b)
    expected = {G.identity, G.power(a, 2), G.power(ab, 2), G.mul(G.power(ab, 2), G.power(a, 2))}
    assert set(Z.members) == expected


def test_derived_of_d2_z4_has_two_elements(groups):
    assert derived_subgroup(groups["D2_semidirect_Z4"]).order == 2


@pytest.mark.parametrize("name", ["Z2xZ2", "Z2xZ2_x_Z2xZ2", "Z4"])
def test_abelian_groups_have_trivial_derived_subgroup(groups, name):
    assert derived_subgroup(groups[name]).members == {groups[name].identity}
    assert center(groups[name]).order == groups[name].order


@pytest.mark.parametrize("name", ALL)
def test_abelianization_is_quotient(groups, name):
    G = groups[name]
    A, q = abelianization(G)
    A.check()
    assert A.is_abelian()
    assert G.order == derived_subgroup(G).order * A.order
    assert is_homomorphism(G.table.tolist(), A.table.tolist(), q.tolist())
    assert set(q.tolist()) == set(A.elements)


def test_abelianization_orders(groups):
    assert abelianization(groups["D2_semidirect_Z4"])[0].order == 8
    assert abelianization(groups["Z2xZ2"])[0].order == 4
    assert abelianization(groups["Z4"])[0].order == 4


@pytest.mark.parametrize("name", ALL)
def test_characters_are_all_homomorphisms(groups, name):
    G = groups[name]
    chars = characters(G)
    assert len(chars) == abelianization(G)[0].order
    assert chars[0].is_trivial()
    for c in chars:
        assert c.homomorphism_residual() < 1e-12
        assert abs(c(G.identity) - 1) < 1e-12
        assert np.allclose(np.abs(c.values), 1)
    gram = np.array([[np.vdot(b.values, a.values) for b in chars] for a in chars])
    assert np.allclose(gram, G.order * np.eye(len(chars)), atol=1e-12)


def test_characters_exhaust_homomorphisms_of_small_groups(groups):
    # every map to the (exp G)-th roots of unity that is a homomorphism is listed
    for name in ("Z2xZ2", "Z4"):
        G = groups[name]
        m = G.exponent()
        roots = np.exp(2j * np.pi * np.arange(m) / m)
        found = 0
        for vals in itertools.product(roots, repeat=G.order):
            v = np.array(vals)
            if abs(v[0] - 1) < 1e-12 and np.allclose(v[:, None] * v[None, :], v[G.table]):
                found += 1
                assert any(np.allclose(c.values, v) for c in characters(G))
        assert found == len(characters(G))


def test_klein_characters_match_kernel_labels(groups):
    K = groups["Z2xZ2"]
    for m in "xyz":
        chi = character_by_kernel(K, m)
        for g in K.labels:
            assert chi(K.index(g)) == (1 if g in ("e", m) else -1)


def test_z4_characters_take_fourth_roots(groups):
    chars = characters(groups["Z4"])
    assert len(chars) == 4
    for c in chars:
        assert np.allclose(c.values ** 4, 1)


def test_d2_z4_has_eight_characters(groups):
    assert len(characters(groups["D2_semidirect_Z4"])) == 8


def test_isomorphism_examples(groups):
    assert not is_isomorphic(groups["Z2xZ2"], groups["Z4"])
    for G in groups.values():
        assert is_isomorphic(G, G)


def test_presentation_matches_explicit_semidirect_product(groups):
    S = klein_swap_semidirect()
    S.check()
    G = groups["D2_semidirect_Z4"]
    f = find_isomorphism(S, G)
    assert f is not None and is_homomorphism(S.table.tolist(), G.table.tolist(), [f[a] for a in S.elements])


def test_rotation_group_is_d2_semidirect_z4(groups):
    G2 = g2_group()
    f = find_isomorphism(G2, groups["D2_semidirect_Z4"])
    assert f is not None
    assert sorted(f.values()) == list(range(16))


def test_isomorphism_rejects_nonisomorphic_same_order():
    Z4xZ4 = direct_product(build_named_group("Z4"), build_named_group("Z4"))
    KxK = build_named_group("Z2xZ2_x_Z2xZ2")
    Z2xZ8 = group_from_presentation("ab", ["a^2", "b^8", "aba^-1b^-1"])
    assert not is_isomorphic(Z4xZ4, KxK)
    assert not is_isomorphic(Z4xZ4, Z2xZ8)


def test_order_limit():
    big = group_from_presentation("a", ["a^65"])
    with pytest.raises(ValueError):
        is_isomorphic(big, big)


def test_todd_coxeter_detects_runaway():
    # free product Z4 * Z2: infinite
    with pytest.raises(ValueError):
        todd_coxeter(2, [[0] * 4, [2] * 2], max_cosets=500)


@pytest.mark.parametrize("n", [2, 3, 5, 6, 8])
def test_cyclic_presentations(n):
    G = group_from_presentation("a", [f"a^{n}"])
    G.check()
    assert G.order == n and G.is_abelian()


def test_dihedral_presentation():
    D4 = group_from_presentation("rs", ["r^4", "s^2", "srsr"])
    assert D4.order == 8 and center(D4).order == 2 and not D4.is_abelian()


@pytest.mark.parametrize("name", ALL)
def test_json_round_trip(groups, name):
    G = groups[name]
    doc = json.dumps(group_to_json(G))
    H = group_from_json(doc)
    assert np.array_equal(H.table, G.table) and H.labels == G.labels


def test_bad_table_rejected():
    with pytest.raises(ValueError):
        FiniteGroup(np.array([[0, 1], [1, 1]]), 0, ("e", "a")).check()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=1, max_size=3))
def test_generated_subgroups_are_closed(gens):
    G = build_named_group("D2_semidirect_Z4")
    H = subgroup_generated(G, gens)
    assert H.is_subgroup()
    assert G.order % H.order == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_power_and_word_consistency(a, b, c):
    G = build_named_group("D2_semidirect_Z4")
    assert G.word(a, b, c) == G.mul(G.mul(a, b), c)
    assert G.power(a, G.element_order(a)) == G.identity
    assert G.power(a, -1) == G.inv(a)
