import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdgroups.gf import field
from tdgroups.linalg import MatrixGF, rational_canonical_form
from tdgroups.shintani import (
    SemilinearElem,
    SizeCapExceeded,
    class_bijection_check,
    gl_enum,
    parabolic_check,
    power_lemma_check,
    require_within_cap,
    shintani_image,
    subfield_correspondence_check,
    twisted_classes,
    twisted_power,
)

F4 = field(2, 2)


def gl2_4():
    return [MatrixGF(F4, A) for A in gl_enum(2, 2, 2).mats]


def test_twisted_power_examples():
    lam = F4.gen
    assert twisted_power(SemilinearElem(MatrixGF(F4, [[lam]]), 1)) == MatrixGF(F4, [[1]])
    I = MatrixGF.identity(F4, 2)
    assert twisted_power(SemilinearElem(I, 1)) == I
    assert twisted_power(SemilinearElem(MatrixGF.diag(F4, [lam, lam]), 1)) == I


def test_twisted_power_is_linear_part_of_power():
    rng = np.random.default_rng(0)
    F = field(2, 4)
    for j in (1, 2):
        for _ in range(30):
            A = MatrixGF(F, rng.integers(0, 16, size=(2, 2)))
            if not A.det():
                continue
            g = SemilinearElem(A, j)
            e = 4 // j
            h = g
            for _ in range(e - 1):
                h = h * g
            assert h.twist == 0 and h.mat == twisted_power(g)


def test_shintani_image_examples():
    I = MatrixGF.identity(F4, 2)
    img = shintani_image(SemilinearElem(I, 1))
    assert img.rcf == MatrixGF.identity(field(2, 1), 2) and img.order_ratio == 2
    assert SemilinearElem(I, 1).order() == 2
    # some x of order 3 gives |g| = 6 and an image of order 3
    found = False
    for x in gl2_4():
        if x.order() != 3:
            continue
        g = SemilinearElem(x, 1)
        if g.order() == 6:
            assert shintani_image(g).rcf.order() == 3
            found = True
    assert found
    one = SemilinearElem(MatrixGF(F4, [[F4.gen]]), 1)
    assert shintani_image(one).rcf.is_identity() and one.order() == 2


def test_order_identity_all_180():
    els = gl2_4()
    assert len(els) == 180
    for x in els:
        g = SemilinearElem(x, 1)
        assert g.order() == 2 * shintani_image(g).rcf.order()


def _bruteforce_twisted_orbits(n, p, f, j):
    """Orbits of x -> h x phi^j(h)^-1 over all h, by explicit closure."""
    F = field(p, f)
    els = [MatrixGF(F, A) for A in gl_enum(n, p, f).mats]
    pairs = [(h, h.frob(j).inverse()) for h in els]
    left = set(els)
    orbits = []
    while left:
        x = left.pop()
        orb = {h * x * hj for h, hj in pairs}
        left -= orb
        orbits.append(orb)
    return orbits


def _class_count(n, p, f):
    F = field(p, f)
    return len({rational_canonical_form(MatrixGF(F, A)) for A in gl_enum(n, p, f).mats})


def test_class_bijection_examples():
    r = class_bijection_check(2, 2, 2, 1)
    assert (r.coset_classes, r.subfield_classes, r.matched, r.coset_size) == (3, 3, True, 180)
    assert r.order_identity_ok and r.well_defined and r.injective
    r = class_bijection_check(1, 2, 2, 1)
    assert (r.coset_classes, r.subfield_classes, r.matched) == (1, 1, True)
    r = class_bijection_check(2, 3, 2, 1)
    # GL2(3) has 8 conjugacy classes
    assert r.subfield_classes == 8 == _class_count(2, 3, 1)
    assert r.coset_classes == 8 and r.matched


def test_twisted_classes_against_bruteforce():
    for args in [(2, 2, 2, 1), (1, 2, 2, 1), (1, 3, 2, 1), (2, 3, 2, 1)]:
        orbits = _bruteforce_twisted_orbits(*args)
        labels = twisted_classes(*args)
        assert len(orbits) == len(set(labels.tolist()))
        assert sorted(len(o) for o in orbits) == sorted(np.unique(labels, return_counts=True)[1].tolist())


@pytest.mark.parametrize("args", [(2, 2, 4, 1), (2, 2, 4, 2), (2, 2, 3, 1)])
def test_class_bijection_more(args):
    r = class_bijection_check(*args)
    assert r.matched and r.order_identity_ok
    n, p, f, j = args
    assert r.subfield_classes == _class_count(n, p, j)


def test_power_lemma():
    assert power_lemma_check(2, 2, 2, 1, 1)
    assert power_lemma_check(2, 2, 2, 1, 2)
    assert power_lemma_check(1, 2, 2, 1, 3)
    # identity: both sides are I
    I = MatrixGF.identity(field(2, 4), 2)
    assert shintani_image(SemilinearElem(I, 1)).rcf.is_identity()


def test_subfield_correspondence():
    assert subfield_correspondence_check(2, 2, 2, 1, 2)
    assert subfield_correspondence_check(1, 2, 2, 1, 2)
    assert subfield_correspondence_check(2, 2, 4, 2, 2)
    assert subfield_correspondence_check(2, 3, 2, 1, 2)
    # k divides j but not f/j = 1: membership in a conjugate of GL2(2)
    assert subfield_correspondence_check(2, 2, 2, 2, 2)
    with pytest.raises(ValueError):
        subfield_correspondence_check(2, 2, 2, 1, 3)


def test_parabolic_correspondence():
    assert parabolic_check(2, 2, 2, 1)
    assert parabolic_check(2, 3, 2, 1)


def test_caps():
    with pytest.raises(SizeCapExceeded):
        require_within_cap(3, 2, 4)
    with pytest.raises(SizeCapExceeded):
        require_within_cap(2, 2, 2, cap=10)
    assert require_within_cap(2, 2, 2) == 256


def test_bad_twist():
    with pytest.raises(ValueError):
        class_bijection_check(2, 2, 4, 3)
    with pytest.raises(ValueError):
        SemilinearElem(MatrixGF(F4, [[0, 0], [0, 1]]), 1)


@given(st.lists(st.integers(0, 179), min_size=3, max_size=3), st.lists(st.integers(0, 1), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_semilinear_product_associative(idx, twists):
    els = gl2_4()
    a, b, c = (SemilinearElem(els[i], t) for i, t in zip(idx, twists))
    assert (a * b) * c == a * (b * c)


@given(st.integers(0, 179), st.integers(0, 179))
@settings(max_examples=60, deadline=None)
def test_image_is_class_function(i, h):
    els = gl2_4()
    x, hm = els[i], els[h]
    y = hm * x * hm.frob(1).inverse()
    assert shintani_image(SemilinearElem(x, 1)).rcf == shintani_image(SemilinearElem(y, 1)).rcf
