"""Small constructors shared by several test modules."""

import itertools

import numpy as np

from tdgroups.gf import field
from tdgroups.grpmat import singer_semisimple
from tdgroups.linalg import MatrixGF, block_diag, companion


def sl2_of_order(F, r):
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        if F.sub(F.mul(a, d), F.mul(b, c)) != 1:
            continue
        A = MatrixGF(F, [[a, b], [c, d]])
        if A.order() == r:
            return A
    raise LookupError(r)


def split_15_sp4():
    """a (+) b in Sp4(4) on the hyperbolic pairs {e0, e3} and {e1, e2}, |a| = 5, |b| = 3."""
    F = field(2, 2)
    a, b = sl2_of_order(F, 5).a, sl2_of_order(F, 3).a
    M = np.zeros((4, 4), dtype=np.int64)
    M[np.ix_([0, 3], [0, 3])] = a
    M[np.ix_([1, 2], [1, 2])] = b
    return MatrixGF(F, M)


def singer_15_sp4():
    return singer_semisimple(2, field(2, 2), 15)


def order_30_gf2():
    """Companion of t^4 + t + 1 (order 15) next to a 2x2 Jordan block."""
    F = field(2, 1)
    C = companion(F, [1, 1, 0, 0, 1])
    J = np.array([[1, 1], [0, 1]])
    return MatrixGF(F, block_diag([C, J]))


def closure(gens):
    """All elements of the matrix group generated by gens (small groups only)."""
    I = MatrixGF.identity(gens[0].ctx, gens[0].n)
    seen = {I}
    frontier = [I]
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = A * g
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        frontier = nxt
    return list(seen)


def sp4_4_element_of_order(r, seed=0):
    from tdgroups.grpmat import standard_generators

    F = field(2, 2)
    gens = standard_generators("Sp", 4, F)
    rng = np.random.default_rng(seed)
    while True:
        A = MatrixGF.identity(F, 4)
        for k in rng.integers(0, len(gens), size=20):
            A = A * gens[k]
        if A.order() == r:
            return A
