import numpy as np
import pytest

from tdgroups.gf import field
from tdgroups.grpmat import (
    FormSpec,
    classical_order,
    dickson_invariant,
    graph_field_auto,
    graph_field_auto_sp4,
    in_family,
    in_omega,
    jordan_decomposition,
    matrix_group_order,
    preserves_form,
    reflection,
    singer_semisimple,
    spinor_norm,
    standard_generators,
    unipotent_j2m,
)
from tdgroups.linalg import MatrixGF, batch_mul, eigen_profile, invariant_subspace_dims, rank

from .helpers import closure, order_30_gf2, singer_15_sp4, split_15_sp4


def test_preserves_form_examples():
    F = field(2, 2)
    form = FormSpec("symplectic", 2, F)
    a = F.gen
    assert preserves_form(MatrixGF.identity(F, 2), form)
    assert preserves_form(MatrixGF.diag(F, [a, F.inv(a)]), form)
    assert not preserves_form(MatrixGF.diag(F, [a, a]), form)


@pytest.mark.parametrize("family,n,pf,order", [
    ("Sp", 4, (2, 1), 720),
    ("Sp", 4, (2, 2), 979200),
    ("SL", 2, (2, 2), 60),
    ("GL", 2, (3, 1), 48),
    ("Sp", 4, (3, 1), 51840),
    ("OmegaPlus", 4, (3, 1), 288),
    ("OmegaMinus", 4, (2, 1), 60),
])
def test_standard_generators_orders(family, n, pf, order):
    F = field(*pf)
    gens = standard_generators(family, n, F)
    assert all(in_family(g, family) for g in gens)
    assert classical_order(family, n, F.q) == order
    assert matrix_group_order(gens) == order


def test_standard_generators_rejects():
    with pytest.raises(ValueError):
        standard_generators("Unitary", 4, field(2, 1))
    with pytest.raises(ValueError):
        standard_generators("Sp", 4, field(2, 9))


def test_singer_semisimple_sp4():
    s = singer_15_sp4()
    assert in_family(s, "Sp") and s.order() == 15
    assert eigen_profile(s).orders == (15,) * 4


def test_singer_semisimple_omega8():
    F = field(2, 1)
    s = singer_semisimple(4, F, 15)
    form = FormSpec("quadratic-plus", 8, F)
    assert in_omega(s, form) and s.order() == 15
    dims = invariant_subspace_dims(s)
    assert 4 in dims
    # both 4-dim summands are totally singular
    from tdgroups.linalg import invariant_subspaces_squarefree

    fours = [W for W in invariant_subspaces_squarefree(s) if len(W) == 4]
    assert len(fours) == 2
    for W in fours:
        assert all(form.Q(v) == 0 for v in W)
        assert all(form.B(u, v) == 0 for u in W for v in W)


def test_singer_semisimple_degree_error():
    with pytest.raises(ValueError):
        singer_semisimple(2, field(2, 2), 3)
    # order 5 has degree 2 over GF(4), so this one is fine
    assert singer_semisimple(2, field(2, 2), 5).order() == 5


def test_unipotent_j2m_examples():
    F3 = field(3, 1)
    u = unipotent_j2m(4, F3)
    assert (u**3).is_identity() and not u.is_identity()
    assert rank(F3, u.minus_identity()) == 4
    assert in_family(u, "OmegaPlus")
    F2 = field(2, 1)
    u2 = unipotent_j2m(2, F2)
    assert (u2**2).is_identity() and rank(F2, u2.minus_identity()) == 2
    assert in_family(u2, "Sp")


def test_unipotent_commutes_with_matched_semisimple():
    F = field(2, 2)
    s = singer_semisimple(2, F, 5)
    u = unipotent_j2m(2, F, r=5)
    assert s * u == u * s
    assert in_family(u, "Sp") and (u**2).is_identity()


def test_jordan_decomposition_examples():
    s15 = singer_15_sp4()
    s, u = jordan_decomposition(s15)
    assert s == s15 and u.is_identity()
    A = order_30_gf2()
    assert A.order() == 30
    s, u = jordan_decomposition(A)
    assert s == A**16 and u == A**15
    assert s.order() == 15 and u.order() == 2
    I = MatrixGF.identity(field(2, 1), 3)
    assert jordan_decomposition(I) == (I, I)


def _encode(M):
    return (M.reshape(len(M), -1) * (1 << np.arange(16))).sum(axis=1)


def test_jordan_uniqueness_exhaustive_sp4_2():
    F = field(2, 1)
    els = closure(standard_generators("Sp", 4, F))
    assert len(els) == 720
    arr = np.stack([A.a for A in els])
    codes = _encode(arr)
    index = {int(c): i for i, c in enumerate(codes)}
    n = len(els)
    # multiplication table
    left = np.repeat(arr, n, axis=0)
    right = np.tile(arr, (n, 1, 1))
    table = np.array([index[int(c)] for c in _encode(batch_mul(F, left, right))]).reshape(n, n)
    orders = np.array([A.order() for A in els])
    semisimple = np.flatnonzero(orders % 2 == 1)
    unipotent = np.flatnonzero((orders & (orders - 1)) == 0)
    for i, A in enumerate(els):
        pairs = [(s, u) for s in semisimple for u in unipotent
                 if table[s, u] == i and table[u, s] == i]
        assert len(pairs) == 1
        s, u = jordan_decomposition(A)
        assert (index[int(_encode(s.a[None])[0])], index[int(_encode(u.a[None])[0])]) == pairs[0]


def test_jordan_random_sp4_4():
    F = field(2, 2)
    gens = standard_generators("Sp", 4, F)
    rng = np.random.default_rng(1)
    for _ in range(200):
        A = MatrixGF.identity(F, 4)
        for k in rng.integers(0, len(gens), size=20):
            A = A * gens[k]
        s, u = jordan_decomposition(A)
        assert s * u == A and u * s == A
        assert s.order() % 2 == 1
        assert u.order() & (u.order() - 1) == 0


def test_graph_field_auto_examples():
    F = field(2, 2)
    rho = graph_field_auto(2)
    assert rho.twist.is_identity()
    I = MatrixGF.identity(F, 4)
    assert graph_field_auto_sp4(I) == I
    gens = standard_generators("Sp", 4, F)
    rng = np.random.default_rng(3)
    x17 = None
    while x17 is None:
        A = MatrixGF.identity(F, 4)
        for k in rng.integers(0, len(gens), size=15):
            A = A * gens[k]
        if A.order() == 17:
            x17 = A
    assert graph_field_auto_sp4(x17).order() == 17
    assert eigen_profile(graph_field_auto_sp4(singer_15_sp4())).orders == (5, 5, 3, 3)
    assert eigen_profile(graph_field_auto_sp4(split_15_sp4())).orders == (15,) * 4


def test_graph_field_auto_homomorphism_and_square():
    F = field(2, 2)
    rho = graph_field_auto(2)
    gens = standard_generators("Sp", 4, F)
    rng = np.random.default_rng(5)

    def word():
        A = MatrixGF.identity(F, 4)
        for k in rng.integers(0, len(gens), size=12):
            A = A * gens[k]
        return A

    for _ in range(300):
        A, B = word(), word()
        assert rho(A * B) == rho(A) * rho(B)
        assert rho(rho(A)) == A.frob(1)
        assert in_family(rho(A), "Sp")


def test_graph_field_auto_rejects_nonsymplectic():
    F = field(2, 2)
    with pytest.raises(ValueError):
        graph_field_auto_sp4(MatrixGF.diag(F, [F.gen] * 4))


def test_dickson_invariant_examples():
    F = field(2, 1)
    form = FormSpec("quadratic-plus", 8, F)
    assert dickson_invariant(MatrixGF.identity(F, 8), form) == 0
    v = np.array([1, 1, 0, 0, 0, 0, 0, 0])  # Q(v) = 1
    Gv = (form.gram() @ v) % 2
    T = MatrixGF(F, (np.eye(8, dtype=np.int64) + np.outer(Gv, v)) % 2)
    assert preserves_form(T, form)
    assert dickson_invariant(T, form) == 1
    assert dickson_invariant(unipotent_j2m(4, F), form) == 0


def test_spinor_norm_examples():
    F = field(3, 1)
    form = FormSpec("quadratic-plus", 4, F)
    assert spinor_norm(MatrixGF.identity(F, 4), form) == 0
    sq = np.array([1, 1, 0, 0])  # Q = 1
    nsq = np.array([1, 2, 0, 0])  # Q = 2, a non-square mod 3
    assert form.Q(sq) == 1 and form.Q(nsq) == 2
    assert spinor_norm(reflection(form, sq), form) == 0
    assert spinor_norm(reflection(form, nsq), form) == 1
    # the product of two reflections of different norm class lies outside Omega
    R = reflection(form, sq) * reflection(form, nsq)
    assert R.det() == 1 and not in_omega(R, form)
