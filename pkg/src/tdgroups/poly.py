"""Univariate polynomials over a FieldCtx.

A polynomial is a list of encoded field elements, lowest degree first, with
no trailing zeros; the zero polynomial is []. Factorization is square-free
decomposition, distinct-degree splitting, then Cantor-Zassenhaus with a
seeded generator so results are reproducible.
"""

from __future__ import annotations

import random
from typing import Sequence

from .arith import factorize
from .gf import FieldCtx

Poly = list


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence[int]) -> int:
    return len(a) - 1


def add(F: FieldCtx, a, b) -> Poly:
    n = max(len(a), len(b))
    return trim([F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def sub(F: FieldCtx, a, b) -> Poly:
    n = max(len(a), len(b))
    return trim([F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)])


def scale(F: FieldCtx, a, c: int) -> Poly:
    if c == 0:
        return []
    return [F.mul(x, c) for x in a]


def mul(F: FieldCtx, a, b) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def monic(F: FieldCtx, a) -> Poly:
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def divmod_(F: FieldCtx, a, b) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(trim(a))
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    if len(a) - 1 < db:
        return [], a
    quo = [0] * (len(a) - db)
    while a and len(a) - 1 >= db:
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - 1 - db
        quo[shift] = c
        for i, bi in enumerate(b):
            if bi:
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        a.pop()
        a = trim(a)
    return trim(quo), a


def mod(F: FieldCtx, a, b) -> Poly:
    return divmod_(F, a, b)[1]


def gcd(F: FieldCtx, a, b) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def powmod(F: FieldCtx, a, k: int, m) -> Poly:
    result: Poly = [1]
    base = mod(F, a, m)
    while k:
        if k & 1:
            result = mod(F, mul(F, result, base), m)
        k >>= 1
        if k:
            base = mod(F, mul(F, base, base), m)
    return mod(F, result, m)


def derivative(F: FieldCtx, a) -> Poly:
    return trim([F.mul(F.scalar(i), a[i]) for i in range(1, len(a))])


def evaluate(F: FieldCtx, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def frob_coeffs(F: FieldCtx, a, j: int = 1) -> Poly:
    return [F.frob(c, j) for c in a]


def pth_root(F: FieldCtx, a) -> Poly:
    """Inverse of the p-th power map for a polynomial in t^p."""
    p = F.p
    return [F.frob(a[i], F.f - 1) for i in range(0, len(a), p)]


def squarefree_decomposition(F: FieldCtx, a) -> list[tuple[Poly, int]]:
    """Pairs (g, e), g squarefree monic and pairwise coprime, with a = prod g^e."""
    a = monic(F, a)
    out: list[tuple[Poly, int]] = []
    if len(a) <= 1:
        return out

    def rec(f, mult):
        if len(f) <= 1:
            return
        d = derivative(F, f)
        if not d:
            for g, e in squarefree_decomposition(F, pth_root(F, f)):
                out.append((g, e * F.p * mult))
            return
        c = gcd(F, f, d)
        w = divmod_(F, f, c)[0]
        i = 1
        while len(w) > 1:
            y = gcd(F, w, c)
            z = divmod_(F, w, y)[0]
            if len(z) > 1:
                out.append((monic(F, z), i * mult))
            i += 1
            w = y
            c = divmod_(F, c, y)[0]
        if len(c) > 1:
            for g, e in squarefree_decomposition(F, pth_root(F, c)):
                out.append((g, e * F.p * mult))

    rec(a, 1)
    merged: dict[tuple, int] = {}
    for g, e in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + e
    return [(list(g), e) for g, e in merged.items()]


def distinct_degree(F: FieldCtx, a) -> list[tuple[Poly, int]]:
    """Split a squarefree monic polynomial into products of same-degree irreducibles."""
    out = []
    f = monic(F, a)
    x = [0, 1]
    h = x
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _trace_map(F: FieldCtx, r, m, d):
    # r + r^2 + r^4 + ... over all Frobenius powers, for characteristic 2
    acc = list(r)
    cur = list(r)
    for _ in range(F.f * d - 1):
        cur = mod(F, mul(F, cur, cur), m)
        acc = add(F, acc, cur)
    return acc


def equal_degree(F: FieldCtx, a, d: int, rng: random.Random) -> list[Poly]:
    """Split a squarefree monic product of degree-d irreducibles."""
    a = monic(F, a)
    n = len(a) - 1
    if n == d:
        return [a]
    while True:
        r = trim([rng.randrange(F.q) for _ in range(n)])
        if len(r) <= 1:
            continue
        if F.p == 2:
            g = _trace_map(F, r, a, d)
        else:
            g = sub(F, powmod(F, r, (F.q**d - 1) // 2, a), [1])
        g = gcd(F, a, g)
        if 1 < len(g) < len(a):
            break
    return equal_degree(F, g, d, rng) + equal_degree(F, divmod_(F, a, g)[0], d, rng)


def factor(F: FieldCtx, a, seed: int = 0) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicity, sorted canonically."""
    if not trim(a):
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    out: dict[tuple, int] = {}
    for g, e in squarefree_decomposition(F, a):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d, rng):
                out[tuple(irr)] = out.get(tuple(irr), 0) + e
    return sorted(((list(g), e) for g, e in out.items()), key=lambda t: (len(t[0]), t[0][::-1]))


def is_irreducible(F: FieldCtx, a) -> bool:
    a = trim(a)
    if len(a) <= 1:
        return False
    fs = factor(F, a)
    return len(fs) == 1 and fs[0][1] == 1


def root_order(F: FieldCtx, g) -> int:
    """Multiplicative order of a root of the monic irreducible g (g != t)."""
    d = len(g) - 1
    if g == [0, 1]:
        raise ValueError("t has the root zero")
    N = F.q**d - 1
    x = [0, 1]
    order = N
    for r, _ in factorize(N):
        while order % r == 0 and powmod(F, x, order // r, g) == [1]:
            order //= r
    return order


def reciprocal(F: FieldCtx, g) -> Poly:
    """Monic polynomial whose roots are the inverses of the roots of g."""
    return monic(F, trim(list(reversed(g))))


def from_roots(F: FieldCtx, roots) -> Poly:
    out: Poly = [1]
    for r in roots:
        out = mul(F, out, [F.neg(r), 1])
    return out


def compose_power(F: FieldCtx, a, k: int) -> Poly:
    """a(t^k)."""
    out = [0] * ((len(a) - 1) * k + 1) if a else []
    for i, c in enumerate(a):
        out[i * k] = c
    return trim(out)


def to_text(F: FieldCtx, a) -> str:
    from .gf import value_text

    return "[" + ",".join(value_text(F, c) for c in a) + "]"
