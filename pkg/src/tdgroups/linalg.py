"""Matrices over finite fields.

Vectors are rows and matrices act on the right, so a subspace W is invariant
under A when W A = W. Entries are encoded field elements held in int64 numpy
arrays; all arithmetic goes through the FieldCtx vector operations.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import poly as P
from .arith import lcm, order_from_multiple
from .gf import FieldCtx, field, parse_text, value_text

MAX_INVARIANT_DIM = 16


# ---------------------------------------------------------------------------
# raw array helpers


def mat_mul(F: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of 2-d arrays A (r x k) and B (k x c)."""
    if F.prime and F.p < 2**20:
        return (A @ B) % F.p
    prod = F.vmul(A[:, :, None], B[None, :, :])
    return F.vsum(prod, axis=1)


def batch_mul(F: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of stacks of matrices, shapes (..., r, k) and (..., k, c)."""
    if F.prime and F.p < 2**20:
        return np.matmul(A, B) % F.p
    prod = F.vmul(A[..., :, :, None], B[..., None, :, :])
    return F.vsum(prod, axis=-2)


def identity(F: FieldCtx, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(F: FieldCtx, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form and pivot columns."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = F.inv(int(R[r, c]))
        if inv != 1:
            R[r] = F.vmul(R[r], inv)
        others = np.nonzero(R[:, c])[0]
        for i in others:
            if i != r:
                R[i] = F.vsub(R[i], F.vmul(R[r], int(R[i, c])))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: FieldCtx, M: np.ndarray) -> int:
    return len(rref(F, M)[1])


def row_space(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    """Canonical basis (nonzero RREF rows) of the row space."""
    R, piv = rref(F, M)
    return R[: len(piv)]


def right_kernel(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    """Rows x with M x^T = 0, as an RREF basis."""
    R, piv = rref(F, M)
    n = M.shape[1]
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = F.neg(int(R[i, fc]))
    if len(basis):
        basis = row_space(F, basis)
    return basis


def left_kernel(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    """Rows v with v M = 0, as an RREF basis."""
    return right_kernel(F, np.ascontiguousarray(M.T))


def inverse(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    aug = np.concatenate([M, identity(F, n)], axis=1)
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:].copy()


def determinant(F: FieldCtx, M: np.ndarray) -> int:
    R = np.array(M, dtype=np.int64, copy=True)
    n = R.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(R[c:, c])[0]
        if len(nz) == 0:
            return 0
        i = c + nz[0]
        if i != c:
            R[[c, i]] = R[[i, c]]
            det = F.neg(det)
        piv = int(R[c, c])
        det = F.mul(det, piv)
        inv = F.inv(piv)
        for i in range(c + 1, n):
            if R[i, c]:
                R[i] = F.vsub(R[i], F.vmul(R[c], F.mul(int(R[i, c]), inv)))
    return det


def solve_left(F: FieldCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """Some X with X A = B, or None."""
    # X A = B  <=>  A^T X^T = B^T
    At = np.ascontiguousarray(A.T)
    Bt = np.ascontiguousarray(B.T)
    aug = np.concatenate([At, Bt], axis=1)
    R, piv = rref(F, aug)
    k = At.shape[1]
    if any(p >= k for p in piv):
        return None
    X = np.zeros((k, Bt.shape[1]), dtype=np.int64)
    for i, pc in enumerate(piv):
        X[pc] = R[i, k:]
    return np.ascontiguousarray(X.T)


def intersect(F: FieldCtx, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Intersection of two row spaces."""
    if len(U) == 0 or len(W) == 0:
        return np.zeros((0, U.shape[1] if U.ndim == 2 else W.shape[1]), dtype=np.int64)
    # v = a U = b W  <=>  [a, b] [U; -W] = 0
    stacked = np.concatenate([U, F.vneg(W)], axis=0)
    K = left_kernel(F, stacked)
    if len(K) == 0:
        return np.zeros((0, U.shape[1]), dtype=np.int64)
    vecs = mat_mul(F, K[:, : len(U)], U)
    return row_space(F, vecs)


def poly_eval_matrix(F: FieldCtx, g, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    acc = np.zeros((n, n), dtype=np.int64)
    for c in reversed(g):
        acc = mat_mul(F, acc, M)
        if c:
            acc[np.arange(n), np.arange(n)] = F.vadd(acc[np.arange(n), np.arange(n)], c)
    return acc


def companion(F: FieldCtx, g) -> np.ndarray:
    """Companion matrix of a monic polynomial, acting on row vectors."""
    d = len(g) - 1
    C = np.zeros((d, d), dtype=np.int64)
    for i in range(d - 1):
        C[i, i + 1] = 1
    for j in range(d):
        C[d - 1, j] = F.neg(g[j])
    return C


def block_diag(blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i : i + k, i : i + k] = b
        i += k
    return out


def char_poly_array(F: FieldCtx, M: np.ndarray) -> list[int]:
    """Characteristic polynomial via reduction to Hessenberg form."""
    n = M.shape[0]
    H = [[int(x) for x in row] for row in M]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        t = H[m][m - 1]
        tinv = F.inv(t)
        for i in range(m + 1, n):
            u = F.mul(H[i][m - 1], tinv)
            if u:
                for j in range(n):
                    H[i][j] = F.sub(H[i][j], F.mul(u, H[m][j]))
                for j in range(n):
                    H[j][m] = F.add(H[j][m], F.mul(u, H[j][i]))
    polys = [[1]]
    for m in range(1, n + 1):
        # (t - h_mm) p_{m-1}
        pm = P.mul(F, [F.neg(H[m - 1][m - 1]), 1], polys[m - 1])
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            c = F.mul(H[i - 1][m - 1], prod)
            if c:
                pm = P.sub(F, pm, P.scale(F, polys[i - 1], c))
        polys.append(pm)
    return polys[n]


# ---------------------------------------------------------------------------


class MatrixGF:
    """Square matrix over GF(q). Immutable by convention."""

    __slots__ = ("ctx", "a", "_hash", "__dict__")

    def __init__(self, ctx: FieldCtx, a):
        arr = np.array(a, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("MatrixGF must be square")
        if arr.size and (arr.min() < 0 or arr.max() >= ctx.q):
            raise ValueError(f"entries outside {ctx}")
        arr.setflags(write=False)
        self.ctx = ctx
        self.a = arr
        self._hash = None

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "MatrixGF":
        return cls(ctx, identity(ctx, n))

    @classmethod
    def diag(cls, ctx: FieldCtx, entries) -> "MatrixGF":
        return cls(ctx, np.diag(np.array(entries, dtype=np.int64)))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __mul__(self, other: "MatrixGF") -> "MatrixGF":
        if other.ctx is not self.ctx:
            raise ValueError("matrices over different fields")
        return MatrixGF(self.ctx, mat_mul(self.ctx, self.a, other.a))

    def __pow__(self, k: int) -> "MatrixGF":
        if k < 0:
            return self.inverse() ** (-k)
        result = identity(self.ctx, self.n)
        base = self.a
        while k:
            if k & 1:
                result = mat_mul(self.ctx, result, base)
            k >>= 1
            if k:
                base = mat_mul(self.ctx, base, base)
        return MatrixGF(self.ctx, result)

    def __eq__(self, other):
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return other.ctx is self.ctx and np.array_equal(self.a, other.a)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.q, self.a.tobytes()))
        return self._hash

    def __repr__(self):
        return f"MatrixGF({self.ctx}, {self.a.tolist()})"

    def inverse(self) -> "MatrixGF":
        return MatrixGF(self.ctx, inverse(self.ctx, self.a))

    def det(self) -> int:
        return determinant(self.ctx, self.a)

    def rank(self) -> int:
        return rank(self.ctx, self.a)

    def transpose(self) -> "MatrixGF":
        return MatrixGF(self.ctx, self.a.T)

    def frob(self, j: int = 1) -> "MatrixGF":
        """Apply x -> x^(p^j) entrywise."""
        return MatrixGF(self.ctx, self.ctx.vfrob(self.a, j))

    def is_identity(self) -> bool:
        return np.array_equal(self.a, identity(self.ctx, self.n))

    def is_scalar(self) -> bool:
        d = self.a[0, 0]
        return d != 0 and np.array_equal(self.a, d * identity(self.ctx, self.n))

    def minus_identity(self) -> np.ndarray:
        n = self.n
        out = self.a.copy()
        out[np.arange(n), np.arange(n)] = self.ctx.vsub(out[np.arange(n), np.arange(n)], 1)
        return out

    def conj(self, g: "MatrixGF") -> "MatrixGF":
        """g^-1 A g."""
        return g.inverse() * self * g

    @cached_property
    def char_poly(self) -> list[int]:
        return char_poly_array(self.ctx, self.a)

    def order(self) -> int:
        """Multiplicative order."""
        F = self.ctx
        fs = P.factor(F, self.char_poly)
        if any(g == [0, 1] for g, _ in fs):
            raise ValueError("singular matrix has no order")
        N = lcm(*[F.q ** (len(g) - 1) - 1 for g, _ in fs])
        emax = max(e for _, e in fs)
        pk = 1
        while pk < emax:
            pk *= F.p
        N *= pk
        return order_from_multiple(lambda d: (self**d).is_identity(), N)

    def projective_order(self) -> int:
        """Least k with A^k scalar."""
        N = self.order()
        return order_from_multiple(lambda d: (self**d).is_scalar(), N)

    def to_text(self) -> str:
        return matrix_to_text(self)


def char_poly(A: MatrixGF) -> list[int]:
    return A.char_poly


def matrix_to_text(A: MatrixGF) -> str:
    F = A.ctx
    rows = [" ".join(value_text(F, v) for v in row) for row in A.a.tolist()]
    return f"{A.n};" + ";".join(rows)


def matrix_from_text(s: str, ctx: FieldCtx | None = None) -> MatrixGF:
    parts = s.strip().split(";")
    try:
        n = int(parts[0])
    except ValueError:
        raise ValueError(f"malformed matrix text {s[:40]!r}") from None
    rows = parts[1:]
    if n < 1 or len(rows) != n:
        raise ValueError(f"matrix text declares {n} rows, found {len(rows)}")
    vals = []
    for row in rows:
        entries = row.split()
        if len(entries) != n:
            raise ValueError("matrix text row has the wrong length")
        elems = [parse_text(e, ctx) for e in entries]
        if ctx is None:
            ctx = elems[0].ctx
        vals.append([e.value for e in elems])
    return MatrixGF(ctx, vals)


# ---------------------------------------------------------------------------
# canonical forms


def kernel_dims(F: FieldCtx, A: np.ndarray, g, e: int) -> list[int]:
    """dim ker g(A)^k for k = 0..e."""
    n = A.shape[0]
    M = poly_eval_matrix(F, g, A)
    dims = [0]
    Mk = identity(F, n)
    for _ in range(e):
        Mk = mat_mul(F, Mk, M)
        dims.append(n - rank(F, Mk))
    return dims


def elementary_divisors(A: MatrixGF) -> list[tuple[list[int], list[int]]]:
    """For each irreducible factor g of the characteristic polynomial, the
    partition of block sizes read off from the kernel chain of g(A)."""
    F = A.ctx
    out = []
    for g, e in P.factor(F, A.char_poly):
        d = len(g) - 1
        dims = kernel_dims(F, A.a, g, e)
        at_least = [(dims[k] - dims[k - 1]) // d for k in range(1, e + 1)]
        sizes = []
        for k in range(e, 0, -1):
            exact = at_least[k - 1] - (at_least[k] if k < e else 0)
            sizes.extend([k] * exact)
        if sum(sizes) * d != dims[-1] or dims[-1] != e * d:
            raise ArithmeticError("inconsistent kernel chain")
        out.append((g, sizes))
    return out


def invariant_factors(A: MatrixGF) -> list[list[int]]:
    """Invariant factors f_1 | f_2 | ... | f_r."""
    F = A.ctx
    eds = elementary_divisors(A)
    r = max(len(sizes) for _, sizes in eds)
    facs = []
    for i in range(r):
        f = [1]
        for g, sizes in eds:
            if i < len(sizes):
                for _ in range(sizes[i]):
                    f = P.mul(F, f, g)
        facs.append(f)
    return facs[::-1]


def rational_canonical_form(A: MatrixGF) -> MatrixGF:
    """Block diagonal of companion matrices of the invariant factors."""
    F = A.ctx
    blocks = [companion(F, f) for f in invariant_factors(A)]
    return MatrixGF(F, block_diag(blocks))


def are_conjugate(A: MatrixGF, B: MatrixGF) -> bool:
    return rational_canonical_form(A) == rational_canonical_form(B)


@dataclass(frozen=True)
class EigenProfile:
    """Multiset of multiplicative orders of the eigenvalues, with multiplicity."""

    orders: tuple[int, ...]

    @property
    def counts(self) -> Counter:
        return Counter(self.orders)

    def __str__(self):
        return "{" + ",".join(str(o) for o in self.orders) + "}"


def eigen_profile(A: MatrixGF) -> EigenProfile:
    F = A.ctx
    orders = []
    for g, e in P.factor(F, A.char_poly):
        if g == [0, 1]:
            raise ValueError("singular matrix")
        orders.extend([P.root_order(F, g)] * ((len(g) - 1) * e))
    return EigenProfile(tuple(sorted(orders, reverse=True)))


def _annihilator(F, W, n):
    # columns c with W c = 0, returned as an (n x k) matrix
    if len(W) == 0:
        return identity(F, n)
    return right_kernel(F, W).T


def invariant_subspace_dims(A: MatrixGF) -> dict[int, np.ndarray]:
    """Every dimension of an A-invariant subspace, each with an RREF witness basis.

    The submodule lattice of V as an F[t]-module has lengths 0..L_g on each
    primary component, so dimensions are sums of d_g * l_g. Witnesses are grown
    one simple factor at a time inside each primary component.
    """
    F = A.ctx
    n = A.n
    if n > MAX_INVARIANT_DIM:
        raise ValueError(f"dimension {n} exceeds cap {MAX_INVARIANT_DIM}")
    comps = []
    for g, e in P.factor(F, A.char_poly):
        d = len(g) - 1
        # chain of submodules of the primary component, one simple step at a time
        chain = [np.zeros((0, n), dtype=np.int64)]
        G = poly_eval_matrix(F, g, A.a)
        W = chain[0]
        for _ in range(e):
            # vectors v with v g(A) in W, not already in W
            C = _annihilator(F, W, n)
            S = left_kernel(F, mat_mul(F, G, C))
            v = None
            for row in S:
                if len(W) == 0 or rank(F, np.vstack([W, row])) > len(W):
                    v = row
                    break
            if v is None:
                raise ArithmeticError("primary component ended early")
            cyc = [v]
            for _ in range(d - 1):
                cyc.append(mat_mul(F, cyc[-1][None, :], A.a)[0])
            W = row_space(F, np.vstack([W] + [c[None, :] for c in cyc]))
            chain.append(W)
        comps.append((d, chain))
    out: dict[int, np.ndarray] = {}
    for choice in itertools.product(*[range(len(chain)) for _, chain in comps]):
        dim = sum(d * l for (d, _), l in zip(comps, choice))
        if dim in out:
            continue
        pieces = [chain[l] for (_, chain), l in zip(comps, choice) if l]
        if pieces:
            out[dim] = row_space(F, np.vstack(pieces))
        else:
            out[dim] = np.zeros((0, n), dtype=np.int64)
    return dict(sorted(out.items()))


def is_invariant(A: MatrixGF, W: np.ndarray) -> bool:
    F = A.ctx
    if len(W) == 0:
        return True
    img = mat_mul(F, W, A.a)
    return rank(F, np.vstack([W, img])) == len(W)


def invariant_subspaces_squarefree(A: MatrixGF) -> list[np.ndarray]:
    """All invariant subspaces when the characteristic polynomial is squarefree.

    The lattice is then Boolean on the kernels of the irreducible factors.
    """
    F = A.ctx
    fs = P.factor(F, A.char_poly)
    if any(e > 1 for _, e in fs):
        raise ValueError("characteristic polynomial is not squarefree")
    kernels = [left_kernel(F, poly_eval_matrix(F, g, A.a)) for g, _ in fs]
    out = []
    for mask in itertools.product([0, 1], repeat=len(kernels)):
        pieces = [k for k, m in zip(kernels, mask) if m]
        if pieces:
            out.append(row_space(F, np.vstack(pieces)))
        else:
            out.append(np.zeros((0, A.n), dtype=np.int64))
    return out


def random_matrix(F: FieldCtx, n: int, rng: np.random.Generator, invertible: bool = True) -> MatrixGF:
    while True:
        M = rng.integers(0, F.q, size=(n, n), dtype=np.int64)
        if not invertible or determinant(F, M):
            return MatrixGF(F, M)


def gl_field(p: int, f: int) -> FieldCtx:
    return field(p, f)
