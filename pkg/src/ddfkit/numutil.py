"""Integer helpers: primality, factoring by trial division, sieves, exact roots.

Everything here is deterministic.  Primality uses the Miller-Rabin witness
set that is provably correct for all inputs below 3.3 * 10**24 (covers
64-bit machine words); larger inputs fall back to trial division.
"""

import math
from fractions import Fraction

# Witnesses covering all n < 3_317_044_064_679_887_385_961_981 (> 2**64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n):
    """Deterministic primality test."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _MR_LIMIT:
        return _miller_rabin(n)
    # Arbitrary-precision inputs beyond the proven witness range: trial
    # division.  Slow, but only exercised for huge inputs in edge tests.
    i = 53
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _miller_rabin(n):
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    """All primes <= n, ascending."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, n + 1) if sieve[i]]


def smallest_prime_factor_sieve(n):
    """Array spf with spf[k] = smallest prime factor of k (spf[0]=spf[1]=0)."""
    import numpy as np

    spf = np.zeros(n + 1, dtype=np.int64)
    spf[2::2] = 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if spf[p] == 0:
            sl = spf[p * p :: 2 * p]
            sl[sl == 0] = p
            spf[p * p :: 2 * p] = sl
    odd = spf[3::2]
    odd[odd == 0] = np.arange(3, n + 1, 2, dtype=np.int64)[odd == 0]
    spf[3::2] = odd
    return spf


def trial_division(n):
    """Sorted list of prime factors of n with multiplicity; n >= 1."""
    if n < 1:
        raise ValueError("trial_division needs n >= 1")
    out = []
    for p in (2, 3):
        while n % p == 0:
            out.append(p)
            n //= p
    d = 5
    while d * d <= n:
        for e in (d, d + 2):
            while n % e == 0:
                out.append(e)
                n //= e
        d += 6
    if n > 1:
        out.append(n)
    return out


def factor_counter(n):
    """{prime: multiplicity} for n >= 1 via trial division."""
    out = {}
    for p in trial_division(n):
        out[p] = out.get(p, 0) + 1
    return out


def integer_nth_root(x, k):
    """floor(x ** (1/k)) for x >= 0, k >= 1, exact integer arithmetic."""
    if x < 0 or k < 1:
        raise ValueError("integer_nth_root needs x >= 0, k >= 1")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    r = int(round(x ** (1.0 / k)))
    # float seed can be off by a couple at word boundaries; fix exactly
    while r > 0 and r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def ceil_pow(n, exponent):
    """ceil(n ** exponent) for integer n >= 1 and Fraction exponent >= 0.

    Computed exactly: n**e = (n**p)**(1/r) with e = p/r, using integer
    r-th roots, so there are no floating-point boundary surprises.
    """
    exponent = Fraction(exponent)
    if n < 1 or exponent < 0:
        raise ValueError("ceil_pow needs n >= 1, exponent >= 0")
    p, r = exponent.numerator, exponent.denominator
    big = n**p
    root = integer_nth_root(big, r)
    if root**r == big:
        return root
    return root + 1


def floor_pow(n, exponent):
    """floor(n ** exponent), exact (see ceil_pow)."""
    exponent = Fraction(exponent)
    if n < 1 or exponent < 0:
        raise ValueError("floor_pow needs n >= 1, exponent >= 0")
    p, r = exponent.numerator, exponent.denominator
    return integer_nth_root(n**p, r)
