"""Shintani descent for GL_n cosets, checked by exhaustive enumeration.

The coset GL_n(p^f) phi^j (phi the p-power Frobenius, j | f, e = f/j) maps to
GL_n(p^j): the class of g = (x, j) goes to the class of N(x)^-1, where N(x) is
the linear part of g^e. Conjugacy in GL_n is decided by rational canonical
forms, so everything below compares rcfs.

Semilinear elements act on column vectors by (A, j) v = A phi^j(v), so
(A, j)(B, k) = (A phi^j(B), j + k).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dfield
from functools import lru_cache

import numpy as np

from .gf import FieldCtx, embedding_table, field
from .grpmat import standard_generators
from .linalg import MatrixGF, batch_mul, identity, rational_canonical_form

log = logging.getLogger(__name__)

# enumeration works on all q^(n^2) matrices
MATRIX_SPACE_CAP = 2**22
GROUP_CAP = 10**7


class ShintaniIntegrityError(ArithmeticError):
    """Raised when a computed image leaves the subfield (never expected)."""


class SizeCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SemilinearElem:
    mat: MatrixGF
    twist: int

    def __post_init__(self):
        f = self.mat.ctx.f
        if self.mat.det() == 0:
            raise ValueError("matrix is singular")
        object.__setattr__(self, "twist", self.twist % f)

    @property
    def f(self) -> int:
        return self.mat.ctx.f

    def __mul__(self, other: "SemilinearElem") -> "SemilinearElem":
        return SemilinearElem(self.mat * other.mat.frob(self.twist), self.twist + other.twist)

    def is_identity(self) -> bool:
        return self.twist == 0 and self.mat.is_identity()

    def order(self) -> int:
        """Order by repeated multiplication (independent of the descent)."""
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur * self
            k += 1
        return k


@dataclass(frozen=True)
class ShintaniImage:
    rcf: MatrixGF
    order_ratio: int
    meta: dict = dfield(default_factory=dict, compare=False)


def _check_j(f: int, j: int) -> int:
    if j < 1 or f % j:
        raise ValueError(f"twist {j} must be a positive divisor of {f}")
    return f // j


def twisted_power(g: SemilinearElem, e: int | None = None) -> MatrixGF:
    """N(x) = x phi^j(x) ... phi^((e-1)j)(x), the linear part of g^e."""
    j = g.twist or g.f
    e0 = _check_j(g.f, j)
    if e is None:
        e = e0
    x = g.mat
    out = x
    for i in range(1, e):
        out = out * x.frob(i * j)
    return out


def _restrict_matrix(A: MatrixGF, small: FieldCtx) -> MatrixGF:
    big = A.ctx
    tab = embedding_table(small, big)
    inv = np.full(big.q, -1, dtype=np.int64)
    inv[tab] = np.arange(small.q)
    vals = inv[A.a]
    if np.any(vals < 0):
        raise ShintaniIntegrityError(f"entries of {A!r} are not in {small}")
    return MatrixGF(small, vals)


def _embed_matrix(A: MatrixGF, big: FieldCtx) -> MatrixGF:
    return MatrixGF(big, embedding_table(A.ctx, big)[A.a])


@lru_cache(maxsize=1 << 16)
def _image_cached(big: FieldCtx, j: int, key: bytes, n: int) -> tuple[MatrixGF, int]:
    N = MatrixGF(big, np.frombuffer(key, dtype=np.int64).reshape(n, n))
    R = rational_canonical_form(N.inverse())
    for v in np.unique(R.a):
        if big.frob(int(v), j) != int(v):
            raise ShintaniIntegrityError("rational canonical form left GF(p^j)")
    return _restrict_matrix(R, field(big.p, j)), N.order()


def shintani_image(g: SemilinearElem) -> ShintaniImage:
    """Image in GL_n(p^j): the rcf of N(x)^-1, certified to lie over GF(p^j)."""
    j = g.twist or g.f
    e = _check_j(g.f, j)
    N = twisted_power(g, e)
    R, _ = _image_cached(g.mat.ctx, j, N.a.tobytes(), N.n)
    return ShintaniImage(R, e, {"convention": "rcf(N(x)^-1)"})


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _batched_det(F: FieldCtx, M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    acc = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = M[..., 0, perm[0]]
        for r in range(1, n):
            term = F.vmul(term, M[..., r, perm[r]])
        acc = F.vsub(acc, term) if inv % 2 else F.vadd(acc, term)
    return acc


@dataclass
class GLEnum:
    """All of GL_n(q) with a code -> index lookup."""

    F: FieldCtx
    n: int
    mats: np.ndarray  # (N, n, n)
    codes: np.ndarray
    lookup: np.ndarray

    def index(self, M: np.ndarray) -> np.ndarray:
        return self.lookup[self.code(M)]

    def code(self, M: np.ndarray) -> np.ndarray:
        n2 = self.n * self.n
        flat = M.reshape(*M.shape[:-2], n2)
        w = self.F.q ** np.arange(n2, dtype=np.int64)
        return flat @ w

    def __len__(self):
        return len(self.mats)


def require_within_cap(n: int, p: int, f: int, cap: int | None = None) -> int:
    """Size q^(n^2) of the matrix space, checked against min(cap, MATRIX_SPACE_CAP)."""
    limit = MATRIX_SPACE_CAP if cap is None else min(cap, MATRIX_SPACE_CAP)
    space = (p**f) ** (n * n)
    if space > limit:
        raise SizeCapExceeded(f"GL_{n}({p**f}) is beyond the enumeration cap {limit}")
    return space


@lru_cache(maxsize=16)
def gl_enum(n: int, p: int, f: int) -> GLEnum:
    F = field(p, f)
    space = require_within_cap(n, p, f)
    codes = np.arange(space, dtype=np.int64)
    digits = (codes[:, None] // (F.q ** np.arange(n * n, dtype=np.int64))) % F.q
    M = digits.reshape(space, n, n)
    keep = _batched_det(F, M) != 0
    M, codes = M[keep], codes[keep]
    lookup = np.full(space, -1, dtype=np.int64)
    lookup[codes] = np.arange(len(codes))
    return GLEnum(F, n, M, codes, lookup)


def _find(par, a):
    while par[a] != a:
        par[a] = par[par[a]]
        a = par[a]
    return a


def twisted_classes(n: int, p: int, f: int, j: int) -> np.ndarray:
    """Orbit label (least index) of each x under x -> h x phi^j(h)^-1, i.e. the
    GL_n(p^f)-classes of the coset GL_n(p^f) phi^j."""
    _check_j(f, j)
    G = gl_enum(n, p, f)
    F = G.F
    par = list(range(len(G)))
    for h in standard_generators("GL", n, F):
        hinv_frob = F.vfrob(h.inverse().a, j)
        img = G.index(batch_mul(F, batch_mul(F, h.a[None], G.mats), hinv_frob[None]))
        for a, b in zip(range(len(G)), img.tolist()):
            ra, rb = _find(par, a), _find(par, b)
            if ra != rb:
                par[max(ra, rb)] = min(ra, rb)
    return np.array([_find(par, a) for a in range(len(G))], dtype=np.int64)


def _norms(G: GLEnum, j: int) -> np.ndarray:
    """N(x) for every x in G, vectorised."""
    F = G.F
    e = F.f // j
    out = G.mats
    for i in range(1, e):
        out = batch_mul(F, out, F.vfrob(G.mats, i * j))
    return out


def _semilinear_orders(G: GLEnum, j: int) -> np.ndarray:
    """|(x, j)| for every x by direct iteration of the semilinear product."""
    F = G.F
    f = F.f
    I = identity(F, G.n)
    cur = G.mats.copy()
    tw = j % f
    orders = np.zeros(len(G), dtype=np.int64)
    k = 1
    while True:
        done = (orders == 0) & (tw == 0) & np.all(cur == I, axis=(1, 2))
        orders[done] = k
        if np.all(orders):
            return orders
        cur = batch_mul(F, cur, F.vfrob(G.mats, tw))
        tw = (tw + j) % f
        k += 1


def _rcf_key(A: MatrixGF) -> bytes:
    return rational_canonical_form(A).a.tobytes()


def _images(n: int, p: int, f: int, j: int):
    """(norm index per element, distinct norm images: index -> (rcf over GF(p^j), order))."""
    G = gl_enum(n, p, f)
    N = _norms(G, j)
    nidx = G.index(N)
    uniq = np.unique(nidx)
    table = {}
    for u in uniq.tolist():
        table[u] = _image_cached(G.F, j, G.mats[u].tobytes(), n)
    return nidx, table


@dataclass
class BijectionReport:
    coset_classes: int
    subfield_classes: int
    matched: bool
    well_defined: bool
    injective: bool
    order_identity_ok: bool
    e: int
    coset_size: int


def class_bijection_check(n: int, p: int, f: int, j: int) -> BijectionReport:
    e = _check_j(f, j)
    G = gl_enum(n, p, f)
    if len(G) > GROUP_CAP:
        raise SizeCapExceeded("group order above cap")
    labels = twisted_classes(n, p, f, j)
    nidx, table = _images(n, p, f, j)
    img_key = {u: v[0].a.tobytes() for u, v in table.items()}
    per_elem = [img_key[u] for u in nidx.tolist()]
    # well defined: every element of a twisted class has the same image
    cls_img: dict[int, bytes] = {}
    well = True
    for lab, k in zip(labels.tolist(), per_elem):
        if cls_img.setdefault(lab, k) != k:
            well = False
    injective = len(set(cls_img.values())) == len(cls_img)
    small = gl_enum(n, p, j)
    small_classes = {_rcf_key(MatrixGF(small.F, A)) for A in small.mats}
    surjective = set(cls_img.values()) == small_classes
    orders = _semilinear_orders(G, j)
    ratio_ok = all(int(o) == e * table[u][1] for o, u in zip(orders.tolist(), nidx.tolist()))
    return BijectionReport(len(cls_img), len(small_classes), well and injective and surjective, well,
                           injective, ratio_ok, e, len(G))


def power_lemma_check(n: int, p: int, f: int, j: int, d: int) -> bool:
    """For x in GL_n(p^f): the image of (x, j) computed in GL_n(p^(df)) phi^j
    equals the d-th power of its image computed in GL_n(p^f) phi^j."""
    _check_j(f, j)
    if d < 1:
        raise ValueError("d must be positive")
    G = gl_enum(n, p, f)
    big = field(p, f * d)
    small = field(p, j)
    nidx, table = _images(n, p, f, j)
    for i, A in enumerate(G.mats):
        x = _embed_matrix(MatrixGF(G.F, A), big)
        F2 = shintani_image(SemilinearElem(x, j)).rcf
        F1 = table[int(nidx[i])][0]
        if _rcf_key(F2) != _rcf_key(F1**d):
            log.info("power lemma fails at %s", x)
            return False
        if F2.ctx is not small:
            raise ShintaniIntegrityError("image over the wrong field")
    return True


def _powers_rcfs(small: GLEnum, k: int) -> set[bytes]:
    return {_rcf_key(MatrixGF(small.F, A) ** k) for A in small.mats}


def subfield_correspondence_check(n: int, p: int, f: int, j: int, k: int) -> bool:
    """(x, j) lies in a conjugate of <GL_n(p^(f/k)), phi> iff its image is a
    k-th power in GL_n(p^j) (k | f/j) or is conjugate into GL_n(p^(j/k)) (otherwise)."""
    e = _check_j(f, j)
    if f % k:
        raise ValueError("k must divide f")
    G = gl_enum(n, p, f)
    labels = twisted_classes(n, p, f, j)
    nidx, table = _images(n, p, f, j)
    # left side: the twisted class meets the subfield group
    sub = gl_enum(n, p, f // k)
    sub_idx = G.index(embedding_table(sub.F, G.F)[sub.mats])
    hit = set(labels[sub_idx].tolist())
    left = np.isin(labels, list(hit))
    small = gl_enum(n, p, j)
    if e % k == 0:
        target = _powers_rcfs(small, k)
    else:
        if j % k:
            raise ValueError("k divides neither f/j nor j")
        sub2 = gl_enum(n, p, j // k)
        target = {_rcf_key(_embed_matrix(MatrixGF(sub2.F, A), small.F)) for A in sub2.mats}
    right_of = {u: _rcf_key(v[0]) in target for u, v in table.items()}
    right = np.array([right_of[u] for u in nidx.tolist()])
    return bool(np.all(left == right))


def _subspaces(F: FieldCtx, n: int, k: int) -> list[np.ndarray]:
    """All k-subspaces of GF(q)^n as sorted arrays of vector codes."""
    vecs = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64)
    w = F.q ** np.arange(n, dtype=np.int64)
    seen = set()
    out = []
    for basis in itertools.combinations(range(1, len(vecs)), k):
        B = vecs[list(basis)]
        span = np.zeros((1, n), dtype=np.int64)
        for b in B:
            span = np.concatenate([F.vadd(span, F.vmul(c, b[None, :])) for c in range(F.q)])
        codes = np.unique(span @ w)
        if len(codes) != F.q**k:
            continue
        key = codes.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(codes)
    return out


def _stabilises(F: FieldCtx, n: int, A: np.ndarray, twist: int, space: np.ndarray) -> bool:
    w = F.q ** np.arange(n, dtype=np.int64)
    vecs = (space[:, None] // w) % F.q
    img = batch_mul(F, A[None], F.vfrob(vecs, twist)[..., None])[..., 0]
    return set((img @ w).tolist()) == set(space.tolist())


def parabolic_check(n: int, p: int, f: int, j: int) -> bool:
    """(x, j) stabilises some proper subspace of GF(p^f)^n semilinearly iff its
    image stabilises one of GF(p^j)^n."""
    _check_j(f, j)
    G = gl_enum(n, p, f)
    small = field(p, j)
    big_spaces = [s for k in range(1, n) for s in _subspaces(G.F, n, k)]
    small_spaces = [s for k in range(1, n) for s in _subspaces(small, n, k)]
    nidx, table = _images(n, p, f, j)
    reducible = {}
    for u, (R, _) in table.items():
        reducible[u] = any(_stabilises(small, n, R.a, 0, s) for s in small_spaces)
    for i, A in enumerate(G.mats):
        left = any(_stabilises(G.F, n, A, j, s) for s in big_spaces)
        if left != reducible[int(nidx[i])]:
            return False
    return True
