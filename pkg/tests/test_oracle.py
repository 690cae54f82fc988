import numpy as np
import pytest

from tdgroups.oracle.ambient import AMBIENT_IDS, ambient, canonical_id
from tdgroups.oracle.bruteforce import (
    core_free_overgroup_direct,
    count_totally_deranged,
    invariable_generation_bruteforce,
    jordan_sanity,
    totally_deranged_bruteforce,
    unique_maximal_count,
)
from tdgroups.oracle.catalogs import load_catalog, outer_closure, shipped_ids
from tdgroups.permrep import PermGroup, conjugacy_classes, is_maximal
from tdgroups.verdict import FALSE, TRUE

from .helpers import singer_15_sp4, sp4_4_element_of_order, split_15_sp4

SMALL = ["PSL2(5)", "PSL2(7)", "PSL2(8)", "PSL2(9)", "PGL2(5)", "PGL2(7)", "PGL2(9)", "PGammaL2(8)", "S6", "M10",
         "PGammaL2(9)", "Sp4(2)"]

# |Aut| data: orders of the shipped groups
ORDERS = {"PSL2(5)": 60, "PSL2(7)": 168, "PSL2(8)": 504, "PSL2(9)": 360, "PGL2(5)": 120, "PGL2(7)": 336,
          "PGL2(9)": 720, "PGammaL2(8)": 1512, "S6": 720, "M10": 720, "PGammaL2(9)": 1440, "Sp4(2)": 720,
          "Sp4(4)": 979200, "Sp4(4).phi": 2 * 979200, "Sp4(4).rho": 4 * 979200}

# number of conjugacy classes of maximal subgroups, from the published tables
MAXIMAL_COUNTS = {"PSL2(5)": 3, "PSL2(7)": 3, "PSL2(8)": 3, "PSL2(9)": 5, "PGL2(5)": 4, "PGL2(7)": 4,
                  "PGL2(9)": 4, "PGammaL2(8)": 4, "S6": 6, "M10": 4, "PGammaL2(9)": 6, "Sp4(2)": 6,
                  "Sp4(4)": 7}


def _mat(amb, A):
    return amb.element(A.to_text())


def test_shipped_set():
    assert set(ORDERS) <= set(shipped_ids())


@pytest.mark.parametrize("gid", sorted(ORDERS))
def test_catalog_orders(gid):
    cat = load_catalog(gid)
    amb = ambient(gid)
    assert amb.G.order() == ORDERS[gid] == cat.group_order
    for e in cat.entries:
        H = cat.subgroup(e.label)
        assert H.order() == e.order
        assert all(amb.G.contains(g) for g in H.gens)
        assert ORDERS[gid] % e.order == 0
    if gid in MAXIMAL_COUNTS:
        assert len(cat.maximals()) == MAXIMAL_COUNTS[gid]


@pytest.mark.parametrize("gid", SMALL)
def test_small_catalogs_maximal(gid):
    cat = load_catalog(gid, check_maximal=True)
    G = cat.ambient.G
    for e in cat.maximals():
        assert is_maximal(G, cat.subgroup(e.label))


def test_sp4_rho_catalog_contents():
    cat = load_catalog("Sp4(4).rho")
    labels = {e.label: e for e in cat.entries}
    assert labels["N(Borel)"].order == 9216 and labels["N(Borel)"].core_free
    assert labels["N(q^2+1)"].order == 17 * 16
    assert labels["<Sp4(2),rho>"].order == 720 * 4
    assert not labels["<T,phi>"].core_free
    # informational only: contained in a conjugate of <Sp4(2), rho>
    assert not labels["N((q-1)^2)"].maximal


def test_unknown_and_alias_ids():
    with pytest.raises(KeyError):
        load_catalog("PSL2(11)")
    with pytest.raises(KeyError):
        ambient("Sp6(2)")
    assert canonical_id("A6.2_1") == "S6"
    assert canonical_id("Sp4(4).4-graph-field") == "Sp4(4).rho"
    assert load_catalog("Sp4(4).ρ") is load_catalog("Sp4(4).rho")


@pytest.mark.parametrize("ext", ["Sp4(4).phi", "Sp4(4).rho"])
def test_catalog_closed_under_outer(ext):
    t = load_catalog("Sp4(4)")
    img = outer_closure(t, ext)
    assert set(img) == {e.label for e in t.entries}
    if ext.endswith("rho"):
        # rho swaps the two parabolics and the two order-7200 classes
        assert img["P1"] == "P2" and img["P2"] == "P1"
    else:
        assert all(k == v for k, v in img.items())


def test_totally_deranged_examples():
    cat = load_catalog("Sp4(4).rho")
    amb = cat.ambient
    v = totally_deranged_bruteforce(cat, _mat(amb, singer_15_sp4()))
    assert v.value == TRUE and len(v.details["misses"]) == 4
    v = totally_deranged_bruteforce(cat, _mat(amb, sp4_4_element_of_order(17)))
    assert v.value == FALSE and v.witness == "N(q^2+1)"
    assert v.details["catalog_hash"] == cat.digest
    # both order-15 eigenvalue types are fused by rho, so agree
    assert totally_deranged_bruteforce(cat, _mat(amb, split_15_sp4())).value == TRUE


@pytest.mark.parametrize("gid", SMALL)
def test_no_totally_deranged_elements(gid):
    n, rep = count_totally_deranged(gid)
    assert n == 0
    assert sum(r.size for r in rep) == ORDERS[gid]


def test_simple_group_every_element_in_a_maximal():
    cat = load_catalog("PSL2(7)")
    G = cat.ambient.G
    for c in conjugacy_classes(G):
        assert totally_deranged_bruteforce(cat, c.rep).value == FALSE


def test_unique_maximal_count_examples():
    cat = load_catalog("Sp4(4).rho")
    amb = cat.ambient
    assert unique_maximal_count(cat, _mat(amb, singer_15_sp4())) == (1, ["<T,phi>"])
    n17, lab17 = unique_maximal_count(cat, _mat(amb, sp4_4_element_of_order(17)))
    assert n17 >= 2 and "<T,phi>" in lab17 and "N(q^2+1)" in lab17
    tcat = load_catalog("Sp4(4)")
    for r in (15, 17, 5, 3):
        n, labels = unique_maximal_count(tcat, _mat(tcat.ambient, sp4_4_element_of_order(r)))
        assert n >= 1
        assert all(tcat.entry(lab).core_free for lab in labels)


@pytest.mark.slow
def test_invariable_generation_examples():
    tcat = load_catalog("Sp4(4)")
    amb = ambient("Sp4(4).rho")
    v = invariable_generation_bruteforce(tcat, "Sp4(4).rho", _mat(amb, singer_15_sp4()))
    assert v.value == TRUE and v.details["direct"] == TRUE
    v = invariable_generation_bruteforce(tcat, "Sp4(4).rho", _mat(amb, sp4_4_element_of_order(5)))
    assert v.value == FALSE and v.details["direct"] == FALSE and len(v.details["direct_witness"]) == 2
    v = invariable_generation_bruteforce(tcat, "Sp4(4).rho", amb.G.identity())
    assert v.value == FALSE


def _cyc(n, c):
    g = list(range(n))
    for a, b in zip(c, c[1:] + c[:1]):
        g[a] = b
    return np.array(g)


def test_jordan_sanity_examples():
    S6 = PermGroup([_cyc(6, (0, 1)), _cyc(6, tuple(range(6)))])
    assert jordan_sanity(S6)
    assert jordan_sanity(PermGroup([_cyc(2, (0, 1))]))
    tcat = load_catalog("Sp4(4)")
    # Sp4(4) acts on the 85 points as the first block of its ambient permutation domain
    from tdgroups.gf import field
    from tdgroups.grpmat import FormSpec, standard_generators
    from tdgroups.permrep import action_on_subspaces

    F = field(2, 2)
    _, G85 = action_on_subspaces(standard_generators("Sp", 4, F), FormSpec("symplectic", 4, F), 1)
    assert jordan_sanity(G85)


def test_direct_overgroup_search_quick_cases():
    amb = ambient("Sp4(4).rho")
    x17 = _mat(amb, sp4_4_element_of_order(17))
    v = core_free_overgroup_direct("Sp4(4).rho", x17)
    assert v.value == FALSE and int(v.details["overgroup_order"]) < amb.G.order()
    assert core_free_overgroup_direct("Sp4(4).rho", x17, max_reps=10).value == "undecided"
    with pytest.raises(ValueError):
        core_free_overgroup_direct("PSL2(7)", ambient("PSL2(7)").G.gens[0])
