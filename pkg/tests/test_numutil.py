import random
from fractions import Fraction

import pytest

from ddfkit.numutil import (
    ceil_pow,
    factor_counter,
    floor_pow,
    integer_nth_root,
    is_prime,
    primes_up_to,
    smallest_prime_factor_sieve,
    trial_division,
)


def test_is_prime_small():
    known = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert is_prime(n) == (n in known)


def test_is_prime_against_sieve():
    ps = set(primes_up_to(5000))
    for n in range(5000):
        assert is_prime(n) == (n in ps)


def test_is_prime_large_words():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert is_prime(1000000000039)
    # 64-bit semiprime
    assert not is_prime((2**31 - 1) * (2**31 + 11))


def test_trial_division():
    rnd = random.Random(0)
    for _ in range(200):
        n = rnd.randrange(1, 10**9)
        fs = trial_division(n)
        prod = 1
        for p in fs:
            assert is_prime(p)
            prod *= p
        assert prod == n
        assert fs == sorted(fs)
    assert trial_division(1) == []


def test_factor_counter():
    assert factor_counter(12) == {2: 2, 3: 1}
    assert factor_counter(1) == {}


def test_spf_sieve():
    spf = smallest_prime_factor_sieve(10000)
    for n in range(2, 10001):
        assert spf[n] == trial_division(n)[0]


def test_integer_nth_root():
    rnd = random.Random(1)
    for _ in range(300):
        x = rnd.randrange(0, 10**24)
        k = rnd.randrange(1, 8)
        r = integer_nth_root(x, k)
        assert r**k <= x < (r + 1) ** k
    # exact powers at boundaries
    for base in (2, 3, 10, 999):
        for k in (2, 3, 5):
            assert integer_nth_root(base**k, k) == base
            assert integer_nth_root(base**k - 1, k) == base - 1


def test_ceil_floor_pow():
    assert ceil_pow(9, Fraction(1, 2)) == 3
    assert ceil_pow(10, Fraction(1, 2)) == 4
    assert floor_pow(10, Fraction(1, 2)) == 3
    assert ceil_pow(1, Fraction(1, 2)) == 1
    assert ceil_pow(4096, Fraction(1, 2)) == 64
    # exact-power boundaries must not wobble
    for n in (4, 9, 16, 10**6, 10**12):
        assert ceil_pow(n, Fraction(1, 2)) == floor_pow(n, Fraction(1, 2))
    assert ceil_pow(8, Fraction(2, 3)) == 4
    assert ceil_pow(9, Fraction(2, 3)) == 5  # 9^(2/3) = 4.32...
    with pytest.raises(ValueError):
        ceil_pow(0, Fraction(1, 2))
