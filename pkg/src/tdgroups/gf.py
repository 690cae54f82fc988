"""Finite fields GF(p^f) with integer-encoded elements.

An element is stored as the integer sum c_i p^i, where c_0 + c_1 x + ... is its
residue modulo the defining polynomial. For p^f <= 2^16 the defining polynomial
is the Conway polynomial, computed here from its definition; above that it is
the lexicographically least primitive monic irreducible. Fields up to 2^16
carry log/antilog tables and support vectorized numpy arithmetic, which the
matrix code relies on.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import divisors, factorize, is_prime

MAX_ORDER = 2**32
CONWAY_LIMIT = 2**16
TABLE_LIMIT = 2**16
ADD_TABLE_LIMIT = 1024


# ---------------------------------------------------------------------------
# polynomials over the prime field, used only to find defining polynomials
# coefficient lists are low degree first


def _pp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mod(a, g, p):
    a = list(a)
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    while len(a) - 1 >= dg and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dg
        if c:
            for i, gi in enumerate(g):
                a[shift + i] = (a[shift + i] - c * gi) % p
        a.pop()
        _pp_trim(a)
    return _pp_trim(a)


def _pp_mulmod(a, b, g, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _pp_mod([c % p for c in out], g, p)


def _pp_powmod(a, k, g, p):
    result = [1]
    base = _pp_mod(a, g, p)
    while k:
        if k & 1:
            result = _pp_mulmod(result, base, g, p)
        k >>= 1
        if k:
            base = _pp_mulmod(base, base, g, p)
    return result


def _pp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _pp_trim(out)


def _pp_gcd(a, b, p):
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        a, b = b, _pp_mod(a, b, p)
    return a


def _pp_is_irreducible(g, p):
    """Rabin's test for a monic g over GF(p)."""
    n = len(g) - 1
    if n == 1:
        return True
    x = [0, 1]
    if _pp_sub(_pp_powmod(x, p**n, g, p), x, p):
        return False
    for r in factorize(n).primes:
        h = _pp_sub(_pp_powmod(x, p ** (n // r), g, p), x, p)
        if len(_pp_gcd(g, h, p)) > 1:
            return False
    return True


def _pp_is_primitive(g, p):
    n = len(g) - 1
    if g[0] == 0:
        return False
    if n == 1:
        root = (-g[0]) % p
        if p == 2:
            return root == 1
        return all(pow(root, (p - 1) // r, p) != 1 for r in factorize(p - 1).primes)
    if not _pp_is_irreducible(g, p):
        return False
    N = p**n - 1
    x = [0, 1]
    return all(_pp_powmod(x, N // r, g, p) != [1] for r in factorize(N).primes)


def _pp_eval_at(poly, h, g, p):
    """Evaluate poly (over GF(p)) at the residue h modulo g."""
    acc: list[int] = []
    for c in reversed(poly):
        acc = _pp_mulmod(acc, h, g, p)
        acc = _pp_sub(acc, [(-c) % p], p)
    return acc


def _candidates(p, n, conway_order):
    """Monic degree-n polynomials over GF(p) in search order."""
    for c in itertools.product(range(p), repeat=n):
        # c = (c_{n-1}, ..., c_0)
        if conway_order:
            coeffs = [((-1) ** (n - i) * c[n - 1 - i]) % p for i in range(n)]
        else:
            coeffs = [c[n - 1 - i] for i in range(n)]
        if coeffs[0] == 0:
            continue
        yield coeffs + [1]


@lru_cache(maxsize=None)
def conway_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Conway polynomial of degree n over GF(p), low degree coefficient first.

    Least primitive polynomial in the alternating-sign lexicographic order that
    is compatible with every Conway polynomial of proper divisor degree.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    subs = [(d, conway_polynomial(p, d)) for d in divisors(n) if d < n]
    N = p**n - 1
    for g in _candidates(p, n, True):
        if not _pp_is_primitive(g, p):
            continue
        ok = True
        for d, cd in subs:
            h = _pp_powmod([0, 1], N // (p**d - 1), g, p)
            if _pp_eval_at(list(cd), h, g, p):
                ok = False
                break
        if ok:
            return tuple(g)
    raise RuntimeError(f"no Conway polynomial found for {p}^{n}")


@lru_cache(maxsize=None)
def least_primitive_polynomial(p: int, n: int) -> tuple[int, ...]:
    for g in _candidates(p, n, False):
        if _pp_is_primitive(g, p):
            return tuple(g)
    raise RuntimeError(f"no primitive polynomial for {p}^{n}")


# ---------------------------------------------------------------------------


class FieldCtx:
    """Arithmetic context for GF(p^f). Obtain instances through :func:`field`."""

    def __init__(self, p: int, f: int, modulus: tuple[int, ...], conway: bool):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus
        self.is_conway = conway
        self.char2 = p == 2
        self.prime = f == 1
        if self.prime:
            self.gen = (-modulus[0]) % p
        else:
            self.gen = p
        self._pows = [p**i for i in range(f)]
        self.has_tables = self.q <= TABLE_LIMIT
        self.exp = self.log = None
        self._add_table = None
        if self.has_tables:
            self._build_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.f})"

    def __reduce__(self):
        return (field, (self.p, self.f))

    # -- digit helpers
    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for i, c in enumerate(ds):
            v += (c % self.p) * self._pows[i]
        return v

    def _mul_x(self, ds):
        # multiply residue by x, reduce by the monic modulus
        top = ds[-1]
        out = [0] + ds[:-1]
        if top:
            for i in range(self.f):
                out[i] = (out[i] - top * self.modulus[i]) % self.p
        return out

    def _poly_mul(self, a: int, b: int) -> int:
        p, f = self.p, self.f
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(f):
                    prod[k - f + i] -= c * self.modulus[i]
        return self.from_digits([c % p for c in prod[:f]])

    def _build_tables(self):
        q = self.q
        exp = np.zeros(2 * q, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        if self.prime:
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = x * self.gen % self.p
        else:
            ds = [1] + [0] * (self.f - 1)
            for i in range(q - 1):
                exp[i] = self.from_digits(ds)
                ds = self._mul_x(ds)
        if len(set(exp[: q - 1].tolist())) != q - 1:
            raise RuntimeError(f"generator of {self} is not primitive")
        exp[q - 1 : 2 * (q - 1)] = exp[: q - 1]
        log[exp[: q - 1]] = np.arange(q - 1)
        self.exp, self.log = exp, log
        self._explist = exp.tolist()
        self._loglist = log.tolist()
        if not self.char2 and not self.prime and q <= ADD_TABLE_LIMIT:
            dig = np.array([self.digits(a) for a in range(q)], dtype=np.int64)
            s = (dig[:, None, :] + dig[None, :, :]) % self.p
            self._add_table = (s * np.array(self._pows)).sum(axis=2)
            self._neg_table = ((-dig) % self.p * np.array(self._pows)).sum(axis=1)
        if not self.prime:
            self._dig = np.array([self.digits(a) for a in range(q)], dtype=np.int64)
            self._powvec = np.array(self._pows, dtype=np.int64)

    # -- scalar arithmetic on encoded ints
    def add(self, a: int, b: int) -> int:
        if self.char2:
            return a ^ b
        if self.prime:
            return (a + b) % self.p
        if self._add_table is not None:
            return int(self._add_table[a, b])
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.char2:
            return a
        if self.prime:
            return (-a) % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.char2:
            return a ^ b
        if self.prime:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.prime:
            return a * b % self.p
        if self.has_tables:
            return self._explist[self._loglist[a] + self._loglist[b]]
        return self._poly_mul(a, b)

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if k == 0 else 0
        if self.has_tables:
            return self._explist[(self._loglist[a] * k) % (self.q - 1)]
        if self.prime:
            return pow(a, k % (self.p - 1), self.p)
        k %= self.q - 1
        r, b = 1, a
        while k:
            if k & 1:
                r = self._poly_mul(r, b)
            k >>= 1
            if k:
                b = self._poly_mul(b, b)
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.has_tables:
            return self._explist[(self.q - 1 - self._loglist[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, j: int = 1) -> int:
        """a^(p^j)."""
        j %= self.f
        if j == 0 or a == 0:
            return a
        if self.has_tables:
            return self._explist[(self._loglist[a] * self.p**j) % (self.q - 1)]
        return self.pow(a, self.p**j)

    def log_of(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no logarithm")
        if self.has_tables:
            return self._loglist[a]
        raise NotImplementedError("discrete log needs tables")

    def elem(self, a: int) -> "FieldElem":
        return FieldElem(self, a % self.q if a >= 0 else a)

    def scalar(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def elements(self):
        return range(self.q)

    # -- vectorized arithmetic (requires tables or a prime field)
    def _need_vec(self):
        if not (self.prime or self.has_tables):
            raise NotImplementedError(f"vector arithmetic unavailable for {self}")

    def vadd(self, a, b):
        self._need_vec()
        if self.char2:
            return np.bitwise_xor(a, b)
        if self.prime:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        da, db = self._dig[a], self._dig[b]
        return ((da + db) % self.p) @ self._powvec

    def vneg(self, a):
        self._need_vec()
        if self.char2:
            return a
        if self.prime:
            return (-a) % self.p
        if self._add_table is not None:
            return self._neg_table[a]
        return ((-self._dig[a]) % self.p) @ self._powvec

    def vsub(self, a, b):
        if self.char2:
            return np.bitwise_xor(a, b)
        if self.prime:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        self._need_vec()
        if self.prime:
            return (np.asarray(a) * np.asarray(b)) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        self._need_vec()
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def vfrob(self, a, j: int = 1):
        self._need_vec()
        a = np.asarray(a)
        j %= self.f
        if j == 0:
            return a.copy()
        out = self.exp[(self.log[a] * self.p**j) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vsum(self, a, axis):
        """Field sum of an array along an axis."""
        if self.char2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.prime:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, 0)
        acc = a[0]
        for k in range(1, a.shape[0]):
            acc = self.vadd(acc, a[k])
        return acc


@lru_cache(maxsize=None)
def field(p: int, f: int = 1) -> FieldCtx:
    """The field GF(p^f); requires p prime and p^f <= 2^32."""
    if not isinstance(p, int) or not isinstance(f, int):
        raise TypeError("p and f must be ints")
    if f < 1:
        raise ValueError("degree must be >= 1")
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if p**f > MAX_ORDER:
        raise ValueError(f"{p}^{f} exceeds 2^32")
    if p**f <= CONWAY_LIMIT:
        return FieldCtx(p, f, conway_polynomial(p, f), True)
    return FieldCtx(p, f, least_primitive_polynomial(p, f), False)


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`FieldCtx`, with operator overloading."""

    ctx: FieldCtx
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.q:
            raise ValueError(f"{self.value} is not an element of {self.ctx}")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElem(self.ctx, self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.ctx, self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElem(self.ctx, self.ctx.sub(o, self.value))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElem(self.ctx, self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElem(self.ctx, self.ctx.div(self.value, o))

    def __pow__(self, k: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return other.ctx is self.ctx and other.value == self.value
        if isinstance(other, int):
            return self.value == other % self.ctx.p and self.value < self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.f, self.value))

    def __bool__(self):
        return self.value != 0

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.digits(self.value)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"FieldElem({to_text(self)})"


def elem(ctx: FieldCtx, value: int) -> FieldElem:
    return FieldElem(ctx, value)


def gen(ctx: FieldCtx) -> FieldElem:
    """The primitive element: a root of the defining polynomial."""
    return FieldElem(ctx, ctx.gen)


def frobenius(a: FieldElem, j: int = 1) -> FieldElem:
    return FieldElem(a.ctx, a.ctx.frob(a.value, j))


def element_order(a: FieldElem) -> int:
    if a.value == 0:
        raise ValueError("zero has no multiplicative order")
    ctx = a.ctx
    N = ctx.q - 1
    if ctx.has_tables:
        from math import gcd

        return N // gcd(ctx.log[a.value].item(), N)
    d = N
    for r in factorize(N).primes:
        while d % r == 0 and ctx.pow(a.value, d // r) == 1:
            d //= r
    return d


def subfield_test(a: FieldElem, j: int) -> bool:
    """Whether a lies in the subfield GF(p^j); j must divide f."""
    if j < 1 or a.ctx.f % j:
        raise ValueError(f"{j} does not divide {a.ctx.f}")
    return a.ctx.frob(a.value, j) == a.value


def frobenius_orbit(a: FieldElem, j: int = 1) -> list[FieldElem]:
    """Orbit of a under x -> x^(p^j)."""
    orbit = [a]
    b = frobenius(a, j)
    while b != a:
        orbit.append(b)
        b = frobenius(b, j)
    return orbit


def minimal_polynomial(a: FieldElem, over_degree: int = 1) -> list[FieldElem]:
    """Minimal polynomial of a over GF(p^j), coefficients low degree first.

    Coefficients are returned as elements of a's field lying in the subfield.
    """
    ctx = a.ctx
    if over_degree < 1 or ctx.f % over_degree:
        raise ValueError(f"{over_degree} does not divide {ctx.f}")
    poly = [1]
    for r in frobenius_orbit(a, over_degree):
        # multiply by (t - r)
        nr = ctx.neg(r.value)
        new = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = ctx.add(new[i + 1], c)
            new[i] = ctx.add(new[i], ctx.mul(c, nr))
        poly = new
    out = [FieldElem(ctx, c) for c in poly]
    for c in out:
        if not subfield_test(c, over_degree):
            raise ArithmeticError("minimal polynomial left the subfield")
    return out


def embed(a: FieldElem, big: FieldCtx) -> FieldElem:
    """Embed a in an extension field by the canonical power map.

    Both fields use Conway polynomials, so the primitive element of the small
    field is the power (q_big - 1)/(q_small - 1) of the big one.
    """
    small = a.ctx
    if big.p != small.p or big.f % small.f:
        raise ValueError(f"{small} does not embed in {big}")
    if a.value == 0:
        return FieldElem(big, 0)
    if small is big:
        return a
    if not (small.is_conway and big.is_conway):
        raise NotImplementedError("canonical embedding needs Conway polynomials")
    k = small.log_of(a.value) if small.has_tables else _dlog(small, a.value)
    step = (big.q - 1) // (small.q - 1)
    return FieldElem(big, big.pow(big.gen, k * step))


def _dlog(ctx, a):
    x = 1
    for k in range(ctx.q - 1):
        if x == a:
            return k
        x = ctx.mul(x, ctx.gen)
    raise ValueError("not a unit")


def restrict(a: FieldElem, small: FieldCtx) -> FieldElem:
    """Inverse of :func:`embed` for elements of the subfield."""
    big = a.ctx
    if a.value == 0:
        return FieldElem(small, 0)
    if not subfield_test(a, small.f):
        raise ValueError(f"{a} does not lie in {small}")
    step = (big.q - 1) // (small.q - 1)
    k = big.log_of(a.value) // step
    return FieldElem(small, small.pow(small.gen, k))


@lru_cache(maxsize=None)
def embedding_table(small: FieldCtx, big: FieldCtx) -> np.ndarray:
    """Array mapping encoded elements of ``small`` to their images in ``big``."""
    return np.array([embed(FieldElem(small, v), big).value for v in range(small.q)], dtype=np.int64)


# ---------------------------------------------------------------------------
# text format  "p^f:[c0,c1,...]"

_TEXT_RE = re.compile(r"^\s*(\d+)\^(\d+):\[([0-9,\s]*)\]\s*$")


def to_text(a: FieldElem) -> str:
    ctx = a.ctx
    return f"{ctx.p}^{ctx.f}:[{','.join(str(c) for c in ctx.digits(a.value))}]"


def value_text(ctx: FieldCtx, v: int) -> str:
    return f"{ctx.p}^{ctx.f}:[{','.join(str(c) for c in ctx.digits(int(v)))}]"


def parse_text(s: str, ctx: FieldCtx | None = None) -> FieldElem:
    m = _TEXT_RE.match(s)
    if not m:
        raise ValueError(f"malformed field element {s!r}")
    p, f = int(m.group(1)), int(m.group(2))
    body = m.group(3).strip()
    coeffs = [int(c) for c in body.split(",")] if body else []
    if ctx is None:
        ctx = field(p, f)
    elif (ctx.p, ctx.f) != (p, f):
        raise ValueError(f"{s!r} is not an element of {ctx}")
    if len(coeffs) != f or any(not 0 <= c < p for c in coeffs):
        raise ValueError(f"malformed coefficients in {s!r}")
    return FieldElem(ctx, ctx.from_digits(coeffs))
