"""Integer arithmetic: factorization, multiplicative orders, primitive prime divisors.

Everything here is exact and deterministic. Factorization is trial division
with a deterministic Miller-Rabin shortcut for the final cofactor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator

MAX_N = 2**63

# Miller-Rabin with these bases is exact below 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic primality test, exact for n < 2^64."""
    if n < 2:
        return False
    for r in _MR_BASES:
        if n % r == 0:
            return n == r
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of ``value`` as sorted (prime, exponent) pairs."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 0
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise ValueError(f"malformed factorization of {self.value}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors do not multiply to {self.value}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Factor ``1 <= n <= 2^63`` by trial division.

    >>> factorize(979200).as_dict()
    {2: 8, 3: 2, 5: 2, 17: 1}
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("factorize expects an int")
    if n < 1 or n > MAX_N:
        raise ValueError(f"factorize: n={n} outside [1, 2^63]")
    out: list[tuple[int, int]] = []
    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    p, step = 5, 2
    while p * p <= m:
        if is_prime(m):
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    out.sort()
    return Factorization(n, tuple(out))


def prime_divisors(n: int) -> list[int]:
    return factorize(n).primes


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def lcm(*xs: int) -> int:
    r = 1
    for x in xs:
        r = r * x // gcd(r, x)
    return r


def is_power_of(n: int, base: int) -> bool:
    """True when n = base^k for some k >= 0."""
    if n < 1:
        return False
    while n % base == 0:
        n //= base
    return n == 1


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, f) with q = p^f, or None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    return fac.factors[0]


def order_from_multiple(is_identity_at, n: int) -> int:
    """Smallest divisor d of n with is_identity_at(d) true, given it holds at n."""
    d = n
    for p, _ in factorize(n):
        while d % p == 0 and is_identity_at(d // p):
            d //= p
    return d


def mult_order(a: int, n: int) -> int:
    """Multiplicative order of a modulo n; a and n must be coprime."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    if n == 1:
        return 1
    a %= n
    return order_from_multiple(lambda d: pow(a, d, n) == 1, euler_phi(n))


def zsygmondy_ppd(q: int, n: int) -> int | None:
    """Largest primitive prime divisor of q^n - 1, or None.

    A prime r is primitive when r divides q^n - 1 but no q^k - 1 with k < n.
    """
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    N = q**n - 1
    if N > MAX_N:
        raise OverflowError(f"{q}^{n} - 1 exceeds 2^63")
    if N == 1:
        return None
    best = None
    for r in factorize(N).primes:
        if q % r == 0:
            continue
        if mult_order(q, r) == n:
            best = r
    return best


def ppd_bruteforce(q: int, n: int) -> int | None:
    """Reference primitive-prime-divisor search by direct gcd checks."""
    N = q**n - 1
    best = None
    for r in range(2, N + 1):
        if N % r == 0 and is_prime(r):
            if all((q**k - 1) % r for k in range(1, n)):
                best = r
    return best
