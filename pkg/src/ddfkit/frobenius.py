"""Frobenius powers X^(q^a) mod h and the difference-polynomial GCDs.

The exponent a may be an arbitrary-precision integer: the ladder below is
logarithmic in a (one modular composition per bit), so only the bit
length matters.
"""

import numpy as np

from . import _coeffs as k
from .ffield import FieldPoly, _modcomp_arr, _require_modulus, poly_gcd_monic


def _x_power_q_arr(ctx):
    """X^q mod h by repeated squaring."""
    return ctx.powmod(np.array([0, 1], dtype=np.int64), ctx.q)


def _frobenius_power_arr(ctx, a, xq=None):
    """X^(q^a) mod h at kernel level; xq optionally precomputed."""
    if a < 0:
        raise ValueError("exponent must be nonnegative")
    if a == 0:
        return ctx.rem(np.array([0, 1], dtype=np.int64))
    if xq is None:
        xq = _x_power_q_arr(ctx)
    acc = None
    doubling = xq  # X^(q^(2^i)) by repeated self-composition
    bits = a.bit_length()
    for i in range(bits):
        if (a >> i) & 1:
            acc = doubling.copy() if acc is None else _modcomp_arr(doubling, acc, ctx)
        if i + 1 < bits:
            doubling = _modcomp_arr(doubling, doubling, ctx)
    return acc


def frobenius_power(h, a):
    """X^(q^a) mod h for monic h of degree >= 1; a arbitrary precision."""
    _require_modulus(h)
    ctx = k.ModContext(h.arr(), h.field.q)
    return FieldPoly.from_arr(h.field, _frobenius_power_arr(ctx, a))


def compose_powers(fa, fb, h):
    """Compose X^(q^s) mod h with X^(q^t) mod h, giving X^(q^(s+t)) mod h."""
    fa._check(fb)
    fa._check(h)
    _require_modulus(h)
    ctx = k.ModContext(h.arr(), h.field.q)
    return FieldPoly.from_arr(h.field, _modcomp_arr(fa.arr(), fb.arr(), ctx))


def difference_gcd(h, s, t):
    """gcd(X^(q^s) - X^(q^t), h) for monic squarefree h: exactly the
    irreducible factors of h whose degree divides |s - t|.

    Returns h itself when s == t (every degree divides zero).
    Squarefreeness of h is the caller's contract; it is not checked here.
    """
    _require_modulus(h)
    if s < 0 or t < 0:
        raise ValueError("exponents must be nonnegative")
    if s == t:
        return h
    x = FieldPoly.x(h.field) % h
    diff = frobenius_power(h, abs(s - t)) - x
    return poly_gcd_monic(diff, h)


class FrobeniusTable:
    """Write-once map u -> X^(q^u) mod modulus for precomputed exponents."""

    __slots__ = ("modulus", "entries")

    def __init__(self, modulus, entries):
        _require_modulus(modulus)
        self.modulus = modulus
        self.entries = dict(entries)

    def __contains__(self, u):
        return u in self.entries

    def __getitem__(self, u):
        try:
            return self.entries[u]
        except KeyError:
            raise KeyError(f"no precomputed power for exponent {u}") from None

    def __len__(self):
        return len(self.entries)

    def exponents(self):
        return sorted(self.entries)

    def __repr__(self):
        return f"FrobeniusTable(mod deg {self.modulus.degree}, {len(self.entries)} entries)"
