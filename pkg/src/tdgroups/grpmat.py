"""Classical matrix groups: forms, generators, special elements, outer automorphisms.

Conventions. Row vectors, matrices act on the right. The symplectic Gram
matrix is J with J[i, n-1-i] = 1 for i < m and -1 for i >= m, so the basis
reads e_1..e_m, f_m..f_1. The plus-type quadratic form is
x1 x2 + x3 x4 + ... and the minus-type form replaces the last pair by
x^2 + x y + d y^2 with t^2 + t + d irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd, prod

import numpy as np

from . import poly as P
from .arith import factorize, is_prime
from .gf import FieldCtx, FieldElem, field, frobenius, minimal_polynomial
from .linalg import (
    MatrixGF,
    block_diag,
    companion,
    identity,
    inverse,
    left_kernel,
    mat_mul,
    rank,
    solve_left,
)

FAMILIES = ("Sp", "OmegaPlus", "OmegaMinus", "SL", "GL")
FORM_KINDS = ("symplectic", "quadratic-plus", "quadratic-minus")


class FormError(ValueError):
    pass


# ---------------------------------------------------------------------------
# forms


def _minus_delta(F: FieldCtx) -> int:
    """Least encoded d with t^2 + t + d irreducible over F."""
    for d in range(F.q):
        if P.is_irreducible(F, [d, 1, 1]):
            return d
    raise FormError(f"no irreducible t^2 + t + d over {F}")


@dataclass(frozen=True)
class FormSpec:
    """A nondegenerate form on GF(q)^n."""

    kind: str
    n: int
    ctx: FieldCtx

    def __post_init__(self):
        if self.kind not in FORM_KINDS:
            raise FormError(f"unknown form kind {self.kind!r}")
        if self.n < 2 or self.n % 2:
            raise FormError("forms here live in even dimension >= 2")

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def is_quadratic(self) -> bool:
        return self.kind != "symplectic"

    def gram(self) -> np.ndarray:
        """Gram matrix of the bilinear (polar) form."""
        F, n = self.ctx, self.n
        if self.kind == "symplectic":
            J = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                J[i, n - 1 - i] = 1 if i < self.m else F.neg(1)
            return J
        Q = self.quadratic_matrix()
        return F.vadd(Q, Q.T)

    def quadratic_matrix(self) -> np.ndarray:
        """Upper triangular Q with Q(v) = v Q v^T."""
        if not self.is_quadratic:
            raise FormError("symplectic forms carry no quadratic form")
        F, n = self.ctx, self.n
        Q = np.zeros((n, n), dtype=np.int64)
        for i in range(0, n, 2):
            Q[i, i + 1] = 1
        if self.kind == "quadratic-minus":
            Q[n - 2, n - 2] = 1
            Q[n - 1, n - 1] = _minus_delta(F)
        return Q

    def Q(self, v: np.ndarray) -> int:
        F = self.ctx
        Qm = self.quadratic_matrix()
        w = mat_mul(F, v[None, :], Qm)[0]
        return int(F.vsum(F.vmul(w, v), axis=0))

    def B(self, u: np.ndarray, v: np.ndarray) -> int:
        F = self.ctx
        w = mat_mul(F, u[None, :], self.gram())[0]
        return int(F.vsum(F.vmul(w, v), axis=0))


def _upper_reduce(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    """Canonical upper triangular matrix of the quadratic form v M v^T."""
    U = np.triu(F.vadd(M, M.T), 1)
    d = np.arange(M.shape[0])
    U[d, d] = M[d, d]
    return U


def preserves_form(A: MatrixGF, form: FormSpec) -> bool:
    """A J A^T = J, and for quadratic forms Q(vA) = Q(v) for all v."""
    F = A.ctx
    if A.n != form.n or F is not form.ctx:
        return False
    if form.is_quadratic:
        Qm = form.quadratic_matrix()
        img = mat_mul(F, mat_mul(F, A.a, Qm), A.a.T)
        return np.array_equal(_upper_reduce(F, img), Qm)
    J = form.gram()
    return np.array_equal(mat_mul(F, mat_mul(F, A.a, J), A.a.T), J)


# ---------------------------------------------------------------------------
# orders


def classical_order(family: str, n: int, q: int) -> int:
    """Order of the quasisimple-type matrix group (not its projective image)."""
    if family == "GL":
        return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(1, n + 1))
    if family == "SL":
        return classical_order("GL", n, q) // (q - 1)
    m = n // 2
    if family == "Sp":
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family in ("OmegaPlus", "OmegaMinus"):
        eps = 1 if family == "OmegaPlus" else -1
        base = q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
        return base // gcd(2, q - 1)
    raise ValueError(f"unknown family {family!r}")


def family_form(family: str, n: int, ctx: FieldCtx) -> FormSpec | None:
    if family == "Sp":
        return FormSpec("symplectic", n, ctx)
    if family == "OmegaPlus":
        return FormSpec("quadratic-plus", n, ctx)
    if family == "OmegaMinus":
        return FormSpec("quadratic-minus", n, ctx)
    return None


# ---------------------------------------------------------------------------
# generators


def _elementary(F, n, i, j, t):
    M = identity(F, n)
    M[i, j] = t
    return M


def _basis_scalars(F: FieldCtx) -> list[int]:
    """An additive basis of GF(q) over GF(p): 1, g, g^2, ..."""
    return [F.pow(F.gen, k) for k in range(F.f)]


def _partner(family, n, i):
    if family == "Sp":
        return n - 1 - i
    return i ^ 1


def _root_element(form: FormSpec, family: str, a: int, b: int, t: int) -> MatrixGF | None:
    """I + t E_ab + c t E_b'a' for the sign c making it preserve the form."""
    F, n = form.ctx, form.n
    ap, bp = _partner(family, n, a), _partner(family, n, b)
    if b == ap:
        if family != "Sp":
            return None
        M = MatrixGF(F, _elementary(F, n, a, b, t))
        return M if preserves_form(M, form) else None
    for c in (1, F.neg(1)):
        M = _elementary(F, n, a, b, t)
        M[bp, ap] = F.add(M[bp, ap], F.mul(c, t))
        A = MatrixGF(F, M)
        if preserves_form(A, form):
            return A
    return None


def siegel_element(form: FormSpec, u: np.ndarray, v: np.ndarray) -> MatrixGF:
    """x -> x + B(x,u) v - B(x,v) u - Q(v) B(x,u) u, for u singular and v orthogonal to u."""
    F = form.ctx
    G = form.gram()
    Gu = mat_mul(F, G, u[:, None])
    Gv = mat_mul(F, G, v[:, None])
    qv = form.Q(v)
    M = identity(F, form.n)
    M = F.vadd(M, mat_mul(F, Gu, v[None, :]))
    M = F.vsub(M, mat_mul(F, Gv, u[None, :]))
    M = F.vsub(M, F.vmul(mat_mul(F, Gu, u[None, :]), qv))
    A = MatrixGF(F, M)
    if not preserves_form(A, form):
        raise FormError("Siegel transformation failed to preserve the form")
    return A


def standard_generators(family: str, n: int, ctx: FieldCtx, verify: bool = False) -> list[MatrixGF]:
    """Root-element generators: for each adjacent root direction and sign,
    one element per additive basis vector of GF(q) over GF(p)."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if n < 1 or n > 12:
        raise ValueError("dimension must be in 1..12")
    if ctx.q > 256:
        raise ValueError("field order must be at most 256")
    F = ctx
    ts = _basis_scalars(F)
    gens: list[MatrixGF] = []
    if family in ("SL", "GL"):
        for i in range(n - 1):
            for t in ts:
                gens.append(MatrixGF(F, _elementary(F, n, i, i + 1, t)))
                gens.append(MatrixGF(F, _elementary(F, n, i + 1, i, t)))
        if family == "GL" and F.q > 2:
            d = identity(F, n)
            d[0, 0] = F.gen
            gens.append(MatrixGF(F, d))
        if not gens:
            gens.append(MatrixGF.identity(F, n))
    else:
        if n % 2:
            raise ValueError(f"{family} needs even dimension")
        form = family_form(family, n, F)
        m = n // 2
        if family == "Sp":
            for i in range(m - 1):
                for t in ts:
                    gens.append(_root_element(form, family, i, i + 1, t))
                    gens.append(_root_element(form, family, i + 1, i, t))
            for t in ts:
                gens.append(_root_element(form, family, m - 1, m, t))
                gens.append(_root_element(form, family, m, m - 1, t))
        else:
            if n < 4:
                raise ValueError("orthogonal families need dimension >= 4")
            npairs = m if family == "OmegaPlus" else m - 1
            for i in range(npairs - 1):
                for a in (2 * i, 2 * i + 1):
                    for b in (2 * i + 2, 2 * i + 3):
                        for t in ts:
                            gens.append(_root_element(form, family, a, b, t))
                            gens.append(_root_element(form, family, b, a, t))
            if family == "OmegaMinus":
                i = npairs - 1
                for a in (2 * i, 2 * i + 1):
                    u = np.zeros(n, dtype=np.int64)
                    u[a] = 1
                    for c in (n - 2, n - 1):
                        for t in ts:
                            v = np.zeros(n, dtype=np.int64)
                            v[c] = t
                            gens.append(siegel_element(form, u, v))
        if any(g is None for g in gens):
            raise FormError("root element construction failed")
    if verify:
        got = matrix_group_order(gens, family_form(family, n, F))
        want = classical_order(family, n, F.q)
        if got != want:
            raise RuntimeError(f"{family}_{n}({F.q}) generators give order {got}, expected {want}")
    return gens


def matrix_group_order(gens: list[MatrixGF], form: FormSpec | None = None) -> int:
    """Order of the matrix group generated by gens, via the action on nonzero vectors."""
    from .permrep import PermGroup, vector_action_perms

    perms, degree = vector_action_perms(gens)
    return PermGroup(perms, degree).order()


# ---------------------------------------------------------------------------
# special elements


def subfield_embedding(small: FieldCtx, big: FieldCtx) -> int:
    """Image in ``big`` of the primitive element of ``small``.

    The least power g^(k (Q-1)/(q-1)) of the big primitive element that is a
    root of the small defining polynomial; k = 1 when both are Conway.
    """
    return _subfield_embedding(small.p, small.f, big.f)


@lru_cache(maxsize=None)
def _subfield_embedding(p, fs, fb):
    small, big = field(p, fs), field(p, fb)
    if fb % fs:
        raise ValueError("not a subfield")
    step = (big.q - 1) // (small.q - 1)
    base = big.pow(big.gen, step)
    beta = base
    for k in range(1, small.q):
        if gcd(k, small.q - 1) == 1:
            val = 0
            for c in reversed(small.modulus):
                val = big.add(big.mul(val, beta), c)
            if val == 0:
                return beta
        beta = big.mul(beta, base)
    raise RuntimeError("subfield embedding not found")


def _embed_value(small: FieldCtx, big: FieldCtx, v: int) -> int:
    if v == 0:
        return 0
    if small.prime:
        return v % small.p
    beta = subfield_embedding(small, big)
    # write v as polynomial in the small generator
    acc = 0
    for c in reversed(small.digits(v)):
        acc = big.add(big.mul(acc, beta), c)
    return acc


def _restrict_value(small: FieldCtx, big: FieldCtx, v: int) -> int:
    for w in range(small.q):
        if _embed_value(small, big, w) == v:
            return w
    raise ValueError("value does not lie in the subfield")


def default_family(m: int) -> str:
    """Sp4 for m = 2, plus-type orthogonal otherwise."""
    return "Sp" if m == 2 else "OmegaPlus"


def singer_semisimple(m: int, ctx: FieldCtx, r: int, family: str | None = None) -> MatrixGF:
    """s = y (+) y^-T on a pair of complementary totally singular m-spaces.

    y is the companion matrix of the minimal polynomial over ctx of the
    canonical element of order r in GF(q^m); it must have degree m.
    """
    F = ctx
    if family is None:
        family = default_family(m)
    if (F.q**m - 1) % r:
        raise ValueError(f"{r} does not divide {F.q}^{m} - 1")
    big = field(F.p, F.f * m)
    lam_val = big.pow(big.gen, (big.q - 1) // r)
    mp = minimal_polynomial(FieldElem(big, lam_val), over_degree=F.f)
    if len(mp) - 1 != m:
        raise ValueError(f"eigenvalue of order {r} has degree {len(mp) - 1} < {m} over {F}")
    g = [_restrict_value(F, big, c.value) for c in mp]
    y = companion(F, g)
    yinvT = inverse(F, y).T.copy()
    return _from_split(F, family, y, yinvT)


def _split_index(family: str, n: int) -> list[int]:
    """Reference coordinate of each split-basis coordinate (U first, then U')."""
    m = n // 2
    if family == "Sp":
        return list(range(m)) + [n - 1 - k for k in range(m)]
    return [2 * k for k in range(m)] + [2 * k + 1 for k in range(m)]


def _from_split(F, family, top, bottom, offdiag=None) -> MatrixGF:
    m = top.shape[0]
    n = 2 * m
    split = block_diag([top, bottom])
    if offdiag is not None:
        split[:m, m:] = offdiag
    sigma = _split_index(family, n)
    ref = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            ref[sigma[i], sigma[j]] = split[i, j]
    return MatrixGF(F, ref)


def unipotent_j2m(m: int, ctx: FieldCtx, r: int | None = None, family: str | None = None) -> MatrixGF:
    """Unipotent u = [[I, X], [0, I]] in split coordinates, with X invertible.

    X is symmetric for the symplectic family and alternating for the plus-type
    orthogonal family, so u has m Jordan blocks of size 2. When r is given, X is
    chosen so that u commutes with ``singer_semisimple(m, ctx, r)``; this needs
    y X y^T = X, so y must be similar to y^-T (r dividing q^(m/2) + 1 suffices).
    """
    F = ctx
    if family is None:
        family = default_family(m)
    if family not in ("Sp", "OmegaPlus"):
        raise ValueError("family must be Sp or OmegaPlus")
    if family == "OmegaPlus" and m % 2:
        raise ValueError("alternating X needs m even")
    y = None
    if r is not None:
        s = singer_semisimple(m, F, r, family)
        sigma = _split_index(family, 2 * m)
        y = s.a[np.ix_(sigma[:m], sigma[:m])]
    X = _compatible_form(F, m, family, y)
    return _from_split(F, family, identity(F, m), identity(F, m), X)


def _compatible_form(F, m, family, y):
    """Invertible X, symmetric (Sp) or alternating (Omega), with y X y^T = X."""
    if y is None:
        if family == "Sp":
            return identity(F, m)
        X = np.zeros((m, m), dtype=np.int64)
        for i in range(0, m, 2):
            X[i, i + 1] = 1
            X[i + 1, i] = F.neg(1)
        return X
    # linear conditions on the entries of X
    idx = [(i, j) for i in range(m) for j in range(m)]
    rows = []
    # y X y^T - X = 0
    for (a, b) in idx:
        row = np.zeros(m * m, dtype=np.int64)
        for k, (i, j) in enumerate(idx):
            c = F.mul(int(y[a, i]), int(y[b, j]))
            if (i, j) == (a, b):
                c = F.sub(c, 1)
            row[k] = c
        rows.append(row)
    for k, (i, j) in enumerate(idx):
        if family == "Sp" and i < j:
            row = np.zeros(m * m, dtype=np.int64)
            row[k] = 1
            row[idx.index((j, i))] = F.neg(1)
            rows.append(row)
        if family == "OmegaPlus":
            if i == j:
                row = np.zeros(m * m, dtype=np.int64)
                row[k] = 1
                rows.append(row)
            elif i < j:
                row = np.zeros(m * m, dtype=np.int64)
                row[k] = 1
                row[idx.index((j, i))] = 1
                rows.append(row)
    from .linalg import right_kernel

    K = right_kernel(F, np.array(rows))
    # deterministic search for an invertible combination
    import itertools

    for coeffs in itertools.product(range(F.q), repeat=len(K)):
        if not any(coeffs):
            continue
        X = np.zeros(m * m, dtype=np.int64)
        for c, row in zip(coeffs, K):
            if c:
                X = F.vadd(X, F.vmul(row, c))
        X = X.reshape(m, m)
        if rank(F, X) == m:
            return X
    raise ValueError("no invertible X with y X y^T = X: y is not similar to y^-T")


def jordan_decomposition(A: MatrixGF, order: int | None = None) -> tuple[MatrixGF, MatrixGF]:
    """Semisimple and unipotent parts as powers of A.

    With |A| = p^a t and gcd(p, t) = 1: s = A^(p^a alpha) where p^a alpha = 1
    mod t, and u = A^(t beta) where t beta = 1 mod p^a.
    """
    p = A.ctx.p
    N = A.order() if order is None else order
    pa = 1
    while N % (pa * p) == 0:
        pa *= p
    t = N // pa
    alpha = pow(pa, -1, t) if t > 1 else 0
    beta = pow(t, -1, pa) if pa > 1 else 0
    s = A ** (pa * alpha % N) if t > 1 else MatrixGF.identity(A.ctx, A.n)
    u = A ** (t * beta % N) if pa > 1 else MatrixGF.identity(A.ctx, A.n)
    return s, u


def dickson_invariant(A: MatrixGF, form: FormSpec) -> int:
    """rank(A - I) mod 2, for an orthogonal matrix in characteristic 2."""
    if A.ctx.p != 2:
        raise ValueError("Dickson invariant is for characteristic 2")
    if not form.is_quadratic or not preserves_form(A, form):
        raise FormError("matrix does not preserve the quadratic form")
    return rank(A.ctx, A.minus_identity()) % 2


def _is_square(F: FieldCtx, a: int) -> bool:
    if a == 0:
        return True
    return F.pow(a, (F.q - 1) // 2) == 1


def reflection(form: FormSpec, v: np.ndarray) -> MatrixGF:
    """x -> x - (B(x,v)/Q(v)) v, for anisotropic v in odd characteristic."""
    F = form.ctx
    qv = form.Q(v)
    if qv == 0:
        raise FormError("reflection needs an anisotropic vector")
    G = form.gram()
    Gv = mat_mul(F, G, v[:, None])
    M = F.vsub(identity(F, form.n), F.vmul(mat_mul(F, Gv, v[None, :]), F.inv(qv)))
    return MatrixGF(F, M)


def reflection_factorization(A: MatrixGF, form: FormSpec) -> list[np.ndarray]:
    """Vectors v_1..v_k with A = r_{v_k} ... r_{v_1} (odd characteristic)."""
    F = A.ctx
    n = form.n
    if F.p == 2:
        raise ValueError("reflection factorization here is for odd characteristic")
    if not preserves_form(A, form):
        raise FormError("matrix does not preserve the quadratic form")
    cur = A
    vecs: list[np.ndarray] = []
    basis = identity(F, n)
    for i in range(n):
        x = basis[i]
        img = mat_mul(F, x[None, :], cur.a)[0]
        v = F.vsub(x, img)
        if not v.any():
            continue
        if form.Q(v) == 0:
            # premultiply by a reflection fixing the earlier basis vectors
            fixed = basis[:i]
            w = _find_helper(form, cur, fixed, x)
            cur = cur * reflection(form, w)
            vecs.append(w)
            img = mat_mul(F, x[None, :], cur.a)[0]
            v = F.vsub(x, img)
            if not v.any():
                continue
        cur = cur * reflection(form, v)
        vecs.append(v)
    if not cur.is_identity():
        raise ArithmeticError("reflection factorization did not terminate at I")
    return vecs


def _find_helper(form, cur, fixed, x):
    import itertools

    F = form.ctx
    n = form.n
    for coeffs in itertools.product(range(F.q), repeat=n):
        w = np.array(coeffs, dtype=np.int64)
        if not w.any() or form.Q(w) == 0:
            continue
        if any(form.B(w, f) for f in fixed):
            continue
        c2 = cur * reflection(form, w)
        img = mat_mul(F, x[None, :], c2.a)[0]
        v = F.vsub(x, img)
        if not v.any() or form.Q(v) != 0:
            return w
    raise ArithmeticError("no helper reflection found")


def spinor_norm(A: MatrixGF, form: FormSpec) -> int:
    """0 when the product of Q(v_i) over a reflection factorization is a square, else 1."""
    F = A.ctx
    acc = 1
    for v in reflection_factorization(A, form):
        acc = F.mul(acc, form.Q(v))
    return 0 if _is_square(F, acc) else 1


def in_omega(A: MatrixGF, form: FormSpec) -> bool:
    if not preserves_form(A, form):
        return False
    if A.ctx.p == 2:
        return dickson_invariant(A, form) == 0
    return A.det() == 1 and spinor_norm(A, form) == 0


def in_family(A: MatrixGF, family: str) -> bool:
    F = A.ctx
    if family == "GL":
        return A.det() != 0
    if family == "SL":
        return A.det() == 1
    form = family_form(family, A.n, F)
    if family == "Sp":
        return preserves_form(A, form)
    return in_omega(A, form)


# ---------------------------------------------------------------------------
# graph-field automorphism of Sp4(2^f)

# basis of the quotient W/R inside the exterior square, W = ker(omega), R its radical
_WEDGE_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_QUOTIENT = [(0, 1), (0, 2), (1, 3), (2, 3)]


def exterior_square(A: MatrixGF) -> np.ndarray:
    """Matrix of A on the exterior square in the basis e_i ^ e_j, i < j."""
    F = A.ctx
    a = A.a
    n = A.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = np.zeros((len(pairs), len(pairs)), dtype=np.int64)
    for r, (i, j) in enumerate(pairs):
        for c, (k, l) in enumerate(pairs):
            out[r, c] = F.sub(F.mul(int(a[i, k]), int(a[j, l])), F.mul(int(a[i, l]), int(a[j, k])))
    return out


def wedge_quotient_map(A: MatrixGF) -> MatrixGF:
    """A acting on ker(omega)/radical, a 4-space with an induced symplectic form.

    omega(e_i ^ e_j) = B(e_i, e_j) is nonzero on e_0^e_3 and e_1^e_2 only, so
    ker(omega) has coordinates 01, 02, 13, 23 plus the line e_0^e_3 + e_1^e_2,
    which is the radical of the wedge pairing restricted to ker(omega).
    """
    if A.ctx.p != 2 or A.n != 4:
        raise ValueError("the exterior-square construction here is for Sp4 in characteristic 2")
    L = exterior_square(A)
    idx = [_WEDGE_PAIRS.index(pr) for pr in _QUOTIENT]
    return MatrixGF(A.ctx, L[np.ix_(idx, idx)])


@dataclass
class GraphFieldAuto:
    """The graph-field automorphism rho of Sp4(2^f).

    rho(A) = B wedge(A) B^-1 for a fixed basis change B. ``twist`` is the stored
    inner element c with rho(rho(A)) = c^-1 phi(A) c, phi the entrywise Frobenius.
    """

    ctx: FieldCtx
    B: np.ndarray
    Binv: np.ndarray
    twist: MatrixGF
    form: FormSpec = dc_field(repr=False, default=None)

    def __call__(self, A: MatrixGF) -> MatrixGF:
        if A.ctx is not self.ctx or A.n != 4:
            raise ValueError("rho acts on Sp4 over its own field")
        if not preserves_form(A, self.form):
            raise FormError("rho is defined on Sp4 only")
        W = wedge_quotient_map(A)
        return MatrixGF(self.ctx, mat_mul(self.ctx, mat_mul(self.ctx, self.B, W.a), self.Binv))

    def power(self, A: MatrixGF, k: int) -> MatrixGF:
        for _ in range(k % 4 if self.twist.is_identity() else k):
            A = self(A)
        return A

    def inverse(self, A: MatrixGF) -> MatrixGF:
        if not self.twist.is_identity():
            raise NotImplementedError("inverse needs an untwisted rho")
        return self.power(A, 3)


def _phi(A: MatrixGF) -> MatrixGF:
    return A.frob(1)


@lru_cache(maxsize=None)
def graph_field_auto(f: int) -> GraphFieldAuto:
    """Build rho for Sp4(2^f), normalized by a diagonal torus element so that
    rho^2 = phi exactly whenever such a normalization exists."""
    F = field(2, f)
    form = FormSpec("symplectic", 4, F)
    gens = standard_generators("Sp", 4, F)
    I4 = identity(F, 4)
    units = [F.pow(F.gen, k) for k in range(F.q - 1)]
    best = None
    for a in units:
        for b in units:
            h = np.diag(np.array([a, b, F.inv(b), F.inv(a)], dtype=np.int64))
            hinv = inverse(F, h)
            rho = GraphFieldAuto(F, h, hinv, MatrixGF.identity(F, 4), form)
            ok = True
            for g in gens:
                if rho(rho(g)) != _phi(g):
                    ok = False
                    break
            if ok:
                best = rho
                break
        if best is not None:
            break
    if best is None:
        rho = GraphFieldAuto(F, I4, I4, MatrixGF.identity(F, 4), form)
        c = _solve_twist(rho, gens)
        best = GraphFieldAuto(F, I4, I4, c, form)
    return best


def _solve_twist(rho, gens):
    """c with c rho^2(g) = phi(g) c for all generators g."""
    F = rho.ctx
    n = 4
    rows = []
    for g in gens:
        R = rho(rho(g)).a
        Ph = _phi(g).a
        # entries of c R - Ph c
        for i in range(n):
            for j in range(n):
                row = np.zeros(n * n, dtype=np.int64)
                for k in range(n):
                    row[i * n + k] = F.add(int(row[i * n + k]), int(R[k, j]))
                    row[k * n + j] = F.sub(int(row[k * n + j]), int(Ph[i, k]))
                rows.append(row)
    from .linalg import right_kernel

    K = right_kernel(F, np.array(rows))
    for row in K:
        c = MatrixGF(F, row.reshape(n, n))
        if c.det():
            return c
    raise ArithmeticError("rho^2 is not inner-twisted phi")


def graph_field_auto_sp4(A: MatrixGF) -> MatrixGF:
    return graph_field_auto(A.ctx.f)(A)
