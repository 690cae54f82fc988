import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdgroups import poly as P
from tdgroups.gf import field
from tdgroups.grpmat import FormSpec
from tdgroups.linalg import (
    MatrixGF,
    are_conjugate,
    companion,
    eigen_profile,
    invariant_factors,
    invariant_subspace_dims,
    invariant_subspaces_squarefree,
    is_invariant,
    matrix_from_text,
    random_matrix,
    rational_canonical_form,
)

from .helpers import singer_15_sp4, split_15_sp4

FIELDS = [(2, 1), (2, 2), (3, 1), (2, 3), (2, 4), (5, 1), (3, 2), (7, 1), (13, 1)]


def test_char_poly_examples():
    F2, F4 = field(2, 1), field(2, 2)
    assert MatrixGF.identity(F2, 2).char_poly == [1, 0, 1]
    g = F4.gen
    C = MatrixGF(F4, companion(F4, [g, 1, 1]))
    assert C.char_poly == [g, 1, 1]


def test_char_poly_of_singer_element():
    s = singer_15_sp4()
    F = s.ctx
    fs = P.factor(F, s.char_poly)
    assert [e for _, e in fs] == [1, 1]
    (g1, _), (g2, _) = fs
    assert len(g1) == len(g2) == 3
    assert P.is_irreducible(F, g1) and P.is_irreducible(F, g2)
    # the roots of one factor are the inverses of the roots of the other
    assert P.reciprocal(F, g1) == g2
    assert P.root_order(F, g1) == P.root_order(F, g2) == 15


def test_rcf_examples():
    F4, F2 = field(2, 2), field(2, 1)
    a = F4.gen
    D = MatrixGF.diag(F4, [a, a])
    assert rational_canonical_form(D) == D
    assert invariant_factors(D) == [[a, 1], [a, 1]]
    J = MatrixGF(F2, [[1, 1], [0, 1]])
    assert rational_canonical_form(J) == MatrixGF(F2, companion(F2, [1, 0, 1]))


def _rng_pairs(count, seed):
    rng = np.random.default_rng(seed)
    for i in range(count):
        p, f = FIELDS[i % len(FIELDS)]
        F = field(p, f)
        n = int(rng.integers(1, 7))
        A = random_matrix(F, n, rng, invertible=False)
        # sprinkle in structured matrices so repeated factors occur
        if i % 3 == 0:
            A = MatrixGF(F, np.diag(rng.integers(0, min(F.q, 3), size=n)))
        Pm = random_matrix(F, n, rng)
        yield A, Pm


def test_rcf_conjugation_invariant_and_idempotent():
    for A, Pm in _rng_pairs(1000, 5):
        R = rational_canonical_form(A)
        assert rational_canonical_form(Pm.inverse() * A * Pm) == R
        assert rational_canonical_form(R) == R


def test_char_poly_is_product_of_invariant_factors():
    for A, _ in _rng_pairs(300, 9):
        F = A.ctx
        prod = [1]
        for f in invariant_factors(A):
            prod = P.mul(F, prod, f)
        assert prod == A.char_poly
        facs = invariant_factors(A)
        for lo, hi in zip(facs, facs[1:]):
            assert P.mod(F, hi, lo) == []


def test_rcf_separates_nonconjugate():
    F = field(2, 1)
    I = MatrixGF.identity(F, 2)
    J = MatrixGF(F, [[1, 1], [0, 1]])
    assert not are_conjugate(I, J)


def test_eigen_profile_examples():
    F = field(2, 2)
    assert eigen_profile(MatrixGF.identity(F, 3)).orders == (1, 1, 1)
    assert eigen_profile(singer_15_sp4()).orders == (15, 15, 15, 15)
    assert eigen_profile(split_15_sp4()).orders == (5, 5, 3, 3)


def test_eigen_profile_invariances():
    rng = np.random.default_rng(2)
    for p, f in [(2, 2), (3, 2), (2, 4)]:
        F = field(p, f)
        for _ in range(60):
            n = int(rng.integers(1, 6))
            A = random_matrix(F, n, rng)
            Pm = random_matrix(F, n, rng)
            prof = eigen_profile(A)
            assert len(prof.orders) == n
            assert eigen_profile(Pm.inverse() * A * Pm) == prof
            assert eigen_profile(A.frob(1)) == prof


def test_invariant_dims_irreducible_quartic():
    F = field(2, 1)
    C = MatrixGF(F, companion(F, [1, 1, 0, 0, 1]))
    assert sorted(invariant_subspace_dims(C)) == [0, 4]


def test_invariant_subspaces_of_singer_element():
    s = singer_15_sp4()
    F = s.ctx
    spaces = invariant_subspaces_squarefree(s)
    two = [W for W in spaces if len(W) == 2]
    assert len(two) == 2
    form = FormSpec("symplectic", 4, F)
    for W in two:
        assert is_invariant(s, W)
        # totally isotropic
        assert all(form.B(u, v) == 0 for u in W for v in W)
    assert sorted(invariant_subspace_dims(s)) == [0, 2, 4]


def test_invariant_dims_identity():
    F = field(3, 1)
    dims = invariant_subspace_dims(MatrixGF.identity(F, 5))
    assert sorted(dims) == list(range(6))
    for d, W in dims.items():
        assert len(W) == d


def test_invariant_dims_witnesses_are_invariant():
    rng = np.random.default_rng(4)
    F = field(2, 2)
    for _ in range(40):
        A = random_matrix(F, 4, rng)
        for d, W in invariant_subspace_dims(A).items():
            assert len(W) == d and is_invariant(A, W)


def test_invariant_dims_cap():
    with pytest.raises(ValueError):
        invariant_subspace_dims(MatrixGF.identity(field(2, 1), 17))


@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (3, 1), (5, 2)]))
@settings(max_examples=60, deadline=None)
def test_matrix_text_roundtrip(seed, pf):
    F = field(*pf)
    A = random_matrix(F, 3, np.random.default_rng(seed), invertible=False)
    assert matrix_from_text(A.to_text()) == A
    assert matrix_from_text(A.to_text()).to_text() == A.to_text()


def test_matrix_order_by_powering():
    rng = np.random.default_rng(8)
    F = field(3, 1)
    for _ in range(50):
        A = random_matrix(F, 3, rng)
        k = A.order()
        assert (A**k).is_identity()
        assert all(not (A**d).is_identity() for d in range(1, k))
