import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdgroups.gf import field
from tdgroups.grpmat import FormSpec, standard_generators
from tdgroups.permrep import (
    ClassTooLarge,
    PermGroup,
    bsgs_order,
    centralizer_order,
    class_meets_subgroup,
    conj,
    conjugacy_classes,
    conjugacy_orbit,
    coset_action,
    cycle_type,
    derived_subgroup,
    fixed_points,
    generates,
    inv,
    is_primitive,
    mul,
    normalizer,
    perm_order,
    pointwise_stabilizer,
    sylow_subgroup,
    action_on_subspaces,
)

from .helpers import singer_15_sp4


def cyc(n, *cycles):
    g = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            g[a] = b
    return np.array(g)


S6 = PermGroup([cyc(6, (0, 1)), cyc(6, (0, 1, 2, 3, 4, 5))])


@pytest.fixture(scope="module")
def sp4_2():
    F = field(2, 1)
    return action_on_subspaces(standard_generators("Sp", 4, F), FormSpec("symplectic", 4, F), 1)


@pytest.fixture(scope="module")
def sp4_4():
    F = field(2, 2)
    return action_on_subspaces(standard_generators("Sp", 4, F), FormSpec("symplectic", 4, F), 1,
                               kind="totally-singular")


def test_conventions():
    g, h = cyc(4, (0, 1)), cyc(4, (1, 2))
    # g then h sends 0 -> 1 -> 2
    assert mul(g, h)[0] == 2
    assert np.array_equal(mul(g, inv(g)), np.arange(4))
    x = cyc(4, (0, 1, 2))
    assert cycle_type(conj(x, h)) == cycle_type(x)


def test_action_degrees(sp4_2, sp4_4):
    am, G = sp4_2
    assert am.degree == 15 and G.is_transitive()
    am4, G4 = sp4_4
    assert am4.degree == (4**4 - 1) // 3 == 85


def test_omega8_singular_points():
    F = field(2, 1)
    form = FormSpec("quadratic-plus", 8, F)
    vecs = np.array(list(itertools.product([0, 1], repeat=8)))[1:]
    singular = sum(form.Q(v) == 0 for v in vecs)
    # (2^4 - 1)(2^3 + 1) singular points, one nonzero vector each over GF(2)
    assert singular == 135
    am, G = action_on_subspaces(standard_generators("OmegaPlus", 8, F), form, 1, kind="totally-singular")
    assert am.degree == 135 and G.is_transitive()


def test_bsgs_orders(sp4_2, sp4_4):
    assert bsgs_order(sp4_2[1]) == 720
    assert bsgs_order(sp4_4[1]) == 979200
    assert bsgs_order(PermGroup([], 5)) == 1


def test_bsgs_order_generator_independent(sp4_2):
    _, G = sp4_2
    rng = random.Random(1)
    for _ in range(5):
        gens = list(G.gens)
        rng.shuffle(gens)
        assert PermGroup(gens, G.degree).order() == 720


def test_coset_action_point_stabiliser(sp4_2):
    _, G = sp4_2
    H = pointwise_stabilizer(G, [0])
    ca = coset_action(G, H)
    assert ca.degree == 15
    phi = [int(r[0]) for r in ca.reps]
    for g in G.gens:
        img = ca.map(g)
        assert all(phi[img[c]] == g[phi[c]] for c in range(15))


def test_coset_action_trivial_and_index_two():
    assert coset_action(S6, S6).degree == 1
    A6 = derived_subgroup(S6)
    assert A6.order() == 360
    ca = coset_action(S6, A6)
    assert ca.degree == 2
    kernel = [g for g in S6.elements() if fixed_points(ca.map(g)) == 2]
    assert len(kernel) == 360 and all(A6.contains(g) for g in kernel)


def test_fixed_points_examples(sp4_4):
    assert fixed_points(np.arange(7)) == 7
    assert fixed_points(cyc(7, tuple(range(7)))) == 0
    am, _ = sp4_4
    assert fixed_points(am.apply(singer_15_sp4())) == 0


def test_conjugacy_orbit_examples(sp4_4):
    assert conjugacy_orbit(S6, np.arange(6))["size"] == 1
    orb = conjugacy_orbit(S6, cyc(6, (0, 1)))
    assert orb["size"] == 15 == len(orb["keys"])
    am, G = sp4_4
    x = am.apply(singer_15_sp4())
    assert conjugacy_orbit(G, x)["size"] == 979200 // 15
    assert centralizer_order(G, x) == 15


def test_class_meets_subgroup_examples(sp4_4):
    am, G = sp4_4
    x15 = am.apply(singer_15_sp4())
    borel = normalizer(G, sylow_subgroup(G, 2))
    assert borel.order() == 2304
    assert not class_meets_subgroup(G, x15, borel).meets
    P17 = sylow_subgroup(G, 17)
    N17 = normalizer(G, P17)
    x17 = P17.gens[0]
    r = class_meets_subgroup(G, x17, N17)
    assert r.meets and N17.contains(r.witness)
    assert class_meets_subgroup(G, G.identity(), borel).meets


def test_is_primitive_examples(sp4_2):
    assert is_primitive(S6)
    assert not is_primitive(PermGroup([cyc(4, (0, 1, 2, 3))]))
    S4 = PermGroup([cyc(4, (0, 1)), cyc(4, (0, 1, 2, 3))])
    D8 = sylow_subgroup(S4, 2)
    assert is_primitive(coset_action(S4, D8).group)
    assert is_primitive(sp4_2[1])
    with pytest.raises(ValueError):
        is_primitive(PermGroup([cyc(4, (0, 1))]))


def test_generates_examples(sp4_4):
    assert generates(S6, S6.gens)
    assert not generates(S6, [cyc(6, (0, 1, 2, 3, 4, 5))])
    am, G = sp4_4
    x = am.apply(singer_15_sp4())
    rng = random.Random(0)
    hits = sum(generates(G, [conj(x, G.random_element(rng)), conj(x, G.random_element(rng))], seed=i)
               for i in range(30))
    # a pair of conjugates can share a maximal overgroup, but rarely
    assert hits >= 27
    # x and a power of x lie in one cyclic group
    assert not generates(G, [x, mul(x, x)])


def test_class_sizes_partition(sp4_2):
    _, G = sp4_2
    classes = conjugacy_classes(G)
    assert sum(c.size for c in classes) == 720
    assert len(classes) == 11  # S6
    assert sorted(c.size for c in classes) == sorted([1, 15, 15, 40, 40, 45, 90, 90, 120, 144, 120])


def test_class_size_cap(sp4_4):
    am, G = sp4_4
    with pytest.raises(ClassTooLarge):
        conjugacy_orbit(G, am.apply(singer_15_sp4()), cap=1000)


@given(st.permutations(list(range(7))), st.permutations(list(range(7))))
@settings(max_examples=100, deadline=None)
def test_order_and_conjugation_invariants(a, b):
    a, b = np.array(a), np.array(b)
    assert perm_order(conj(a, b)) == perm_order(a)
    assert cycle_type(conj(a, b)) == cycle_type(a)
    k = perm_order(a)
    p = np.arange(7)
    for _ in range(k):
        p = mul(p, a)
    assert np.array_equal(p, np.arange(7))
