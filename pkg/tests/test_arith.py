import random
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tdgroups.arith import (
    divisors,
    euler_phi,
    factorize,
    is_power_of,
    is_prime,
    lcm,
    mult_order,
    ppd_bruteforce,
    prime_divisors,
    zsygmondy_ppd,
)


def test_factorize_examples():
    assert factorize(1).as_dict() == {}
    assert factorize(979200).as_dict() == {2: 8, 3: 2, 5: 2, 17: 1}
    assert factorize(15).as_dict() == {3: 1, 5: 1}


def test_factorize_range_guard():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        factorize(2**63 + 1)


def test_factorize_inverse_of_multiplication_exhaustive():
    # every n <= 10^6 by sieve of smallest prime factors
    N = 10**6
    spf = list(range(N + 1))
    for i in range(2, int(N**0.5) + 1):
        if spf[i] == i:
            for k in range(i * i, N + 1, i):
                if spf[k] == k:
                    spf[k] = i
    for n in range(1, N + 1, 7):
        expect = {}
        m = n
        while m > 1:
            expect[spf[m]] = expect.get(spf[m], 0) + 1
            m //= spf[m]
        assert factorize(n).as_dict() == expect


@given(st.integers(min_value=1, max_value=2**62))
@settings(max_examples=200, deadline=None)
def test_factorize_matches_sympy(n):
    assert factorize(n).as_dict() == sympy.factorint(n)


@given(st.integers(min_value=1, max_value=10**15))
@settings(max_examples=300, deadline=None)
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_mult_order_examples():
    assert mult_order(2, 15) == 4
    assert mult_order(1, 7) == 1
    assert mult_order(3, 80) == 4
    with pytest.raises(ValueError):
        mult_order(2, 4)


def test_mult_order_divides_phi():
    rng = random.Random(7)
    done = 0
    while done < 1000:
        n = rng.randint(2, 10**6)
        a = rng.randint(1, n)
        if gcd(a, n) != 1:
            continue
        k = mult_order(a, n)
        assert euler_phi(n) % k == 0
        assert pow(a, k, n) == 1 % n
        assert k == sympy.n_order(a, n)
        done += 1


def test_zsygmondy_examples():
    assert zsygmondy_ppd(2, 6) is None
    assert zsygmondy_ppd(2, 4) == 5
    assert zsygmondy_ppd(2, 1) is None


def test_zsygmondy_against_bruteforce():
    for q in range(2, 17):
        for n in range(1, 13):
            if q**n > 2**22:
                continue
            r = zsygmondy_ppd(q, n)
            assert r == ppd_bruteforce(q, n)
            if r is not None:
                assert (q**n - 1) % r == 0
                assert all((q**k - 1) % r for k in range(1, n))


def test_small_helpers():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert prime_divisors(360) == [2, 3, 5]
    assert lcm(4, 6, 10) == 60
    assert is_power_of(64, 2) and is_power_of(1, 3) and not is_power_of(12, 2)
    assert euler_phi(1) == 1 and euler_phi(36) == 12
