import pytest
from hypothesis import assume, given, settings, strategies as st

from tdgroups.arith import divisors, is_prime, lcm
from tdgroups.classify import (
    CosetParams,
    Family,
    GroupSpec,
    OuterSpec,
    Strictness,
    enumerate_td_orders,
    theorem1_exists,
    theorem2_element,
    theorem2_params,
    theorem3_invgen,
    theorem4_unique,
)
from tdgroups.gf import field
from tdgroups.grpmat import singer_semisimple, unipotent_j2m
from tdgroups.linalg import MatrixGF
from tdgroups.verdict import FALSE, TRUE

from .helpers import singer_15_sp4, split_15_sp4

SP4_4 = GroupSpec.sp4(2)
GRAPH = OuterSpec(graph=True)


def test_theorem1_examples():
    assert theorem1_exists(SP4_4, GRAPH).value == TRUE
    assert theorem1_exists(GroupSpec.omega_plus(6, 2, 1), GRAPH).value == FALSE
    assert theorem1_exists(GroupSpec(Family.OTHER, 3, 1, 3), GRAPH).value == FALSE
    # no graph-field automorphism
    assert theorem1_exists(SP4_4, OuterSpec(graph=False)).value == FALSE
    # Aut(A6) has no totally deranged elements
    assert theorem1_exists(GroupSpec.sp4(1), GRAPH).value == FALSE


def test_theorem2_params_examples():
    v = theorem2_params(GroupSpec.omega_plus(4, 3, 1), GRAPH, CosetParams(1, 5, 3, 15))
    assert v.value == TRUE and all(v.conditions.values())
    for f in (1, 2, 3):
        q = 2**f
        spec = GroupSpec.omega_plus(4, 2, f)
        assert theorem2_params(spec, GRAPH, CosetParams(1, q**4 - 1, 1, q**4 - 1)).value == TRUE
    v = theorem2_params(SP4_4, GRAPH, CosetParams(1, 1, 1, 1))
    assert v.value == FALSE and not v.conditions["c"]
    v = theorem2_params(SP4_4, GRAPH, CosetParams(1, 5, 1, 5))
    assert v.value == FALSE and not v.conditions["b"]


@pytest.mark.parametrize("cp", [
    CosetParams(2, 3, 1, 3),   # e even
    CosetParams(3, 3, 1, 3),   # e does not divide f = 2
    CosetParams(1, 2, 1, 2),   # |s| divisible by p
    CosetParams(1, 3, 3, 9),   # u not a power of 2
    CosetParams(1, 3, 2, 3),   # |x^e| inconsistent
])
def test_malformed_params_rejected(cp):
    with pytest.raises(ValueError):
        theorem2_params(SP4_4, GRAPH, cp)


def test_enumerate_examples():
    assert enumerate_td_orders(SP4_4, GRAPH, 1) == [(15, 1, 15)]
    assert enumerate_td_orders(GroupSpec.omega_plus(4, 2, 1), GRAPH, 1) == [(15, 1, 15)]
    assert enumerate_td_orders(GroupSpec.omega_plus(4, 2, 3), GRAPH, 3) == [(15, 1, 15)]


def test_theorem3_examples():
    assert theorem3_invgen(SP4_4, GRAPH, CosetParams(1, 15, 1, 15)).value == TRUE
    assert theorem3_invgen(SP4_4, GRAPH, CosetParams(1, 17, 1, 17)).value == FALSE
    assert theorem3_invgen(SP4_4, GRAPH, CosetParams(1, 1, 1, 1)).value == FALSE
    with pytest.raises(ValueError):
        theorem3_invgen(GroupSpec.sp4(3), GRAPH, CosetParams(3, 3, 1, 3))


def test_theorem4_examples():
    v = theorem4_unique(SP4_4, GRAPH, CosetParams(1, 15, 1, 15))
    assert v.value == TRUE and v.witness == "G ∩ ⟨Inndiag(T), φ⟩"
    s64 = 2**12 - 1
    assert theorem2_params(GroupSpec.sp4(6), GRAPH, CosetParams(1, s64, 1, s64)).value == TRUE
    assert theorem4_unique(GroupSpec.sp4(6), GRAPH, CosetParams(1, s64, 1, s64)).value == FALSE
    # POmega+8(8), duality: f/(e i) = 3 is not a power of 2
    spec = GroupSpec.omega_plus(4, 2, 3)
    s = 8**4 - 1
    assert theorem4_unique(spec, GRAPH, CosetParams(1, s, 1, s)).value == FALSE
    assert theorem4_unique(spec, OuterSpec(graph=True, triality=True), CosetParams(1, s, 1, s)).value == TRUE


def test_theorem2_element_examples():
    for mode in Strictness:
        assert theorem2_element(SP4_4, GRAPH, singer_15_sp4(), strictness=mode).value == TRUE
        I = MatrixGF.identity(field(2, 2), 4)
        assert theorem2_element(SP4_4, GRAPH, I, strictness=mode).value == FALSE
    x = split_15_sp4()
    assert theorem2_element(SP4_4, GRAPH, x).value == TRUE
    v = theorem2_element(SP4_4, GRAPH, x, strictness="singer")
    assert v.value == FALSE and v.conditions["singer"] is False


def test_theorem2_element_mixed_orthogonal():
    # s u with |s| = 5, |u| = 3 in Omega+8(3): matched pair on the split decomposition
    F = field(3, 1)
    spec = GroupSpec.omega_plus(4, 3, 1)
    s = singer_semisimple(4, F, 5)
    u = unipotent_j2m(4, F, r=5)
    assert s * u == u * s
    v = theorem2_element(spec, GRAPH, s * u)
    assert v.details["s_order"] == 5 and v.details["u_order"] == 3
    assert v.value == theorem2_params(spec, GRAPH, CosetParams(1, 5, 3, 15)).value


def test_theorem2_element_membership():
    F = field(2, 2)
    with pytest.raises(ValueError):
        theorem2_element(SP4_4, GRAPH, MatrixGF.diag(F, [F.gen] * 4))
    with pytest.raises(ValueError):
        theorem2_element(SP4_4, GRAPH, MatrixGF.identity(F, 2))


def test_group_spec_validation():
    with pytest.raises(ValueError):
        GroupSpec(Family.SP4_CHAR2, 4, 1)
    with pytest.raises(ValueError):
        GroupSpec(Family.SP4_CHAR2, 2, 2, 3)
    assert GroupSpec.sp4(3).in_scope() == (True, "")
    assert not GroupSpec(Family.SP4_CHAR2, 3, 1).in_scope()[0]


# -- invariants --------------------------------------------------------------

specs = st.one_of(
    st.builds(GroupSpec.sp4, st.integers(1, 10)),
    st.builds(lambda m, p, f: GroupSpec.omega_plus(m, p, f), st.sampled_from([2, 3, 4, 8]),
              st.sampled_from([2, 3, 5, 7]), st.integers(1, 4)),
)


@given(specs, st.booleans())
@settings(max_examples=120, deadline=None)
def test_theorem1_iff_sweep_nonempty(spec, graph):
    assume(spec.p ** (spec.f * spec.m) <= 2**20)
    outer = OuterSpec(graph=graph)
    sweep = any(enumerate_td_orders(spec, outer, e) for e in divisors(spec.f) if e % 2)
    assert (theorem1_exists(spec, outer).value == TRUE) == sweep


@given(specs, st.data())
@settings(max_examples=150, deadline=None)
def test_theorem3_implies_theorem2(spec, data):
    assume(spec.q**spec.m <= 2**24)
    s = data.draw(st.sampled_from(divisors(spec.q**spec.m - 1)))
    u = data.draw(st.sampled_from([1, spec.p]))
    cp = CosetParams(1, s, u, lcm(s, u))
    if theorem3_invgen(spec, GRAPH, cp).value == TRUE:
        assert theorem2_params(spec, GRAPH, cp).value == TRUE
    # for e = 1 the two criteria coincide
    assert theorem3_invgen(spec, GRAPH, cp).value == theorem2_params(spec, GRAPH, cp).value


@given(specs, st.data(), st.integers(1, 4), st.booleans())
@settings(max_examples=150, deadline=None)
def test_theorem4_implies_theorem2(spec, data, i, triality):
    assume(spec.q**spec.m <= 2**24)
    es = [e for e in divisors(spec.f) if e % 2]
    e = data.draw(st.sampled_from(es))
    q0m = spec.p ** (spec.f // e * spec.m)
    s = data.draw(st.sampled_from(divisors(q0m - 1)))
    cp = CosetParams(e, s, 1, s)
    outer = OuterSpec(graph=True, phi_power=i, triality=triality and spec.m == 4)
    if theorem4_unique(spec, outer, cp).value == TRUE:
        assert theorem2_params(spec, outer, cp).value == TRUE


@given(st.sampled_from([5, 15]))
def test_singer_mode_implies_literal(r):
    for x in (singer_semisimple(2, field(2, 2), r), split_15_sp4(), singer_15_sp4()):
        if theorem2_element(SP4_4, GRAPH, x, strictness="singer").value == TRUE:
            assert theorem2_element(SP4_4, GRAPH, x).value == TRUE


@given(specs, st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_verdict_is_conjunction(spec, seed):
    assume(spec.q**spec.m <= 2**24)
    ds = divisors(spec.q**spec.m - 1)
    s = ds[seed % len(ds)]
    v = theorem2_params(spec, GRAPH, CosetParams(1, s, 1, s))
    assert (v.value == TRUE) == all(v.conditions.values())
    if spec.m % 2 == 0:
        assert set(v.conditions) == {"family", "outer", "a", "b", "c", "d"}
    else:
        assert v.value == FALSE and v.conditions["family"] is False
