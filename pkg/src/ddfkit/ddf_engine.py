"""Distinct-degree factorization by recursive interval splitting.

The driver factors a monic squarefree f by bisecting the index range of
the difference polynomials g_i = X^(q^s_j) - X^(q^t_l) attached to a
verified divisor-set pair (indices ordered i = j + l*|S|), taking gcds
with interval products computed by a baby-steps-giant-steps scheme.  At
single-index base cases the factor degrees all divide |s - t|, and a
randomized smooth-degree procedure finishes the job.

Indices with s == t contribute the constant 1 to every product: a zero
difference would be divisible by everything and stall the recursion.
"""

import math
from collections import Counter

import numpy as np

from . import _coeffs as k
from .divisor_sets import enumerate_index, pair_factorization
from .errors import ContractViolationError, UncoveredFactorError
from .ffield import (
    FieldPoly,
    _modcomp_arr,
    _multipoint_eval_rows,
    _require_modulus,
    linear_root_product,
)
from .frobenius import FrobeniusTable, _frobenius_power_arr, _x_power_q_arr

# telemetry: how often the Algorithm-1 pigeonhole bound was checked
STATS = {"pigeonhole_checks": 0}


# ---------------------------------------------------------------------------
# deterministic randomness


_M64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z):
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


class RngStream:
    """Counter-based deterministic random stream (SplitMix64 flavor).

    Identical seeds give identical traces; fork(tag) derives an
    independent child stream as a pure function of (seed, tag), so the
    recursion gets reproducible per-branch randomness regardless of
    evaluation order.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed, counter=0):
        self.seed = int(seed) & _M64
        self.counter = int(counter)

    def next_u64(self):
        self.counter += 1
        return _mix64(self.seed + self.counter * _GAMMA)

    def randbelow(self, n):
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        limit = (_M64 + 1) - (_M64 + 1) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def sample_indices(self, n, m):
        """m distinct indices from range(n), order-insensitive, deterministic."""
        idx = list(range(n))
        for i in range(m):
            j = i + self.randbelow(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:m]

    def fork(self, tag):
        return RngStream(_mix64(self.seed ^ _mix64((int(tag) + 1) * _GAMMA)))

    def __repr__(self):
        return f"RngStream(seed={self.seed:#x}, counter={self.counter})"


# ---------------------------------------------------------------------------
# result container


class DistinctDegreeFactorization:
    """Map degree -> monic product of all irreducible factors of that degree.

    Only nontrivial entries are stored (no constant-1 factors).
    """

    def __init__(self, field, factors):
        self.field = field
        clean = {}
        for deg, poly in factors.items():
            if poly.is_one():
                continue
            if not poly.is_monic():
                raise ValueError(f"degree-{deg} part is not monic")
            if deg < 1 or poly.degree % deg != 0:
                raise ValueError(
                    f"degree-{deg} part has degree {poly.degree}, not a multiple"
                )
            clean[int(deg)] = poly
        self.factors = dict(sorted(clean.items()))

    def __eq__(self, other):
        return (
            isinstance(other, DistinctDegreeFactorization)
            and other.field == self.field
            and other.factors == self.factors
        )

    def __iter__(self):
        return iter(self.factors.items())

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, deg):
        return self.factors[deg]

    def product(self):
        out = FieldPoly.one(self.field)
        for poly in self.factors.values():
            out = out * poly
        return out

    def __repr__(self):
        parts = ", ".join(f"{d}:deg{p.degree}" for d, p in self.factors.items())
        return f"DistinctDegreeFactorization({{{parts}}})"


class IntervalTask:
    """A recursion node: poly divides the product of g_i over [lo, hi]."""

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly, lo, hi):
        self.poly = poly
        self.lo = int(lo)
        self.hi = int(hi)

    def __repr__(self):
        return f"IntervalTask(deg={self.poly.degree}, lo={self.lo}, hi={self.hi})"


class SmoothTask:
    """A polynomial whose irreducible degrees divide the product of primes."""

    __slots__ = ("poly", "primes")

    def __init__(self, poly, primes):
        self.poly = poly
        self.primes = tuple(sorted(primes))

    def __repr__(self):
        return f"SmoothTask(deg={self.poly.degree}, primes={self.primes})"


# ---------------------------------------------------------------------------
# preprocessing: X^(q^u) mod h for all u in S union T


def preprocess_powers(h, pair):
    """Frobenius table for every exponent in S union T.

    Per progression term: one ladder for the base and the step, then
    successive compositions along the term; sums across terms are filled
    by composing the per-term entries over the product enumeration.
    """
    _require_modulus(h)
    if not pair.verified:
        raise ValueError("divisor-set pair is not verified")
    if h.degree > pair.n:
        raise ValueError(f"deg h = {h.degree} exceeds the pair's n = {pair.n}")
    ctx = k.ModContext(h.arr(), h.field.q)
    xq = _x_power_q_arr(ctx)
    entries = {}
    for gap in (pair.s_set, pair.t_set):
        _fill_gap_powers(gap, ctx, xq, entries)
    field = h.field
    return FrobeniusTable(h, {u: FieldPoly.from_arr(field, a) for u, a in entries.items()})


def _fill_gap_powers(gap, ctx, xq, entries):
    per_term = []
    for term in gap.terms:
        base_pow = _frobenius_power_arr(ctx, term.base, xq)
        step_pow = _frobenius_power_arr(ctx, term.step, xq)
        vals = []
        cur = base_pow
        u = term.base
        for j in range(term.length):
            if j > 0:
                cur = _modcomp_arr(cur, step_pow, ctx)
                u += term.step
            vals.append((u, cur))
        per_term.append(vals)

    def rec(idx, value, poly):
        if idx == len(per_term):
            if value not in entries:
                entries[value] = poly
            return
        for u, pu in per_term[idx]:
            combined = pu if poly is None else _modcomp_arr(poly, pu, ctx)
            rec(idx + 1, value + u, combined)

    rec(0, 0, None)


# ---------------------------------------------------------------------------
# interval polynomials


def interval_polynomial(h, pair, table, lo, hi):
    """Product of g_i mod h over pair indices lo..hi (s == t indices give 1).

    The index range splits into a partial left row, whole middle rows and
    a partial right row.  Middle rows are handled in bulk: form
    p(Z) = prod(Z - X^(q^t)) over the middle rows and multipoint-evaluate
    it at X^(q^s) for every s, so the row-block costs O(|S| + |T|) ring
    operations instead of |S| * |T|.
    """
    _require_modulus(h)
    if not 0 <= lo <= hi < pair.size:
        raise IndexError(f"interval [{lo}, {hi}] out of range for {pair.size} indices")
    if table.modulus != h and not (table.modulus % h).is_zero():
        raise ValueError("table modulus is not a multiple of the target modulus")
    ctx = k.ModContext(h.arr(), h.field.q)
    tbl = _TableView(table, ctx)
    out = _interval_arr(ctx, pair, tbl, lo, hi)
    return FieldPoly.from_arr(h.field, out)


class _TableView:
    """Frobenius-table entries reduced mod the current working modulus."""

    __slots__ = ("_source", "_ctx", "_cache")

    def __init__(self, table, ctx):
        if isinstance(table, FrobeniusTable):
            self._source = {u: p.arr() for u, p in table.entries.items()}
        else:
            self._source = table
        self._ctx = ctx
        self._cache = {}

    def __call__(self, u):
        got = self._cache.get(u)
        if got is None:
            try:
                raw = self._source[u]
            except KeyError:
                raise KeyError(f"missing table entry for exponent {u}") from None
            got = self._ctx.rem(raw)
            self._cache[u] = got
        return got


_MIDDLE_BULK_MIN = 12  # below this many middle rows, row-by-row is cheaper


def _interval_arr(ctx, pair, tbl, lo, hi):
    ns = len(pair.s_enum)
    a0, a1 = lo % ns, lo // ns
    b0, b1 = hi % ns, hi // ns
    acc = np.array([1], dtype=np.int64)
    if a1 == b1:
        return _row_product(ctx, pair, tbl, a1, a0, b0, acc)
    acc = _row_product(ctx, pair, tbl, a1, a0, ns - 1, acc)
    if b1 - a1 - 1 >= _MIDDLE_BULK_MIN and ns >= _MIDDLE_BULK_MIN:
        acc = _middle_product_bulk(ctx, pair, tbl, a1 + 1, b1 - 1, acc)
    else:
        for row in range(a1 + 1, b1):
            acc = _row_product(ctx, pair, tbl, row, 0, ns - 1, acc)
    return _row_product(ctx, pair, tbl, b1, 0, b0, acc)


def _row_product(ctx, pair, tbl, row, j_lo, j_hi, acc):
    t_val = pair.t_enum[row]
    for j in range(j_lo, j_hi + 1):
        s_val = pair.s_enum[j]
        if s_val == t_val:
            continue
        term = k.sub(tbl(s_val), tbl(t_val), ctx.q)
        acc = ctx.mulmod(acc, term)
        if acc.shape[0] == 0:
            return acc  # the whole product is 0 mod h
    return acc


def _middle_product_bulk(ctx, pair, tbl, row_lo, row_hi, acc):
    t_vals = [pair.t_enum[r] for r in range(row_lo, row_hi + 1)]
    t_count = Counter(t_vals)
    roots = [tbl(t) for t in t_vals]
    p_rows = _root_product(roots, ctx)
    s_vals = list(pair.s_enum)
    plain = [j for j, s in enumerate(s_vals) if t_count.get(s, 0) == 0]
    vals = {}
    if plain:
        pts = [tbl(s_vals[j]) for j in plain]
        for j, v in zip(plain, _multipoint_eval_rows(p_rows, pts, ctx)):
            vals[j] = v
    for j, s in enumerate(s_vals):
        c = t_count.get(s, 0)
        if c == 0:
            continue
        # s collides with c middle rows: divide out (Z - u)^c, then evaluate
        u = tbl(s)
        rows = p_rows
        for _ in range(c):
            rows = _deflate_root(rows, u, ctx)
        vals[j] = _horner_eval_rows(rows, u, ctx)
    for j in range(len(s_vals)):
        acc = ctx.mulmod(acc, vals[j])
        if acc.shape[0] == 0:
            return acc
    return acc


def _root_product(roots, ctx):
    n = len(roots)
    if n <= 8:
        return linear_root_product(roots, ctx)
    half = n // 2
    return k.rz_mul(_root_product(roots[:half], ctx), _root_product(roots[half:], ctx), ctx)


def _deflate_root(rows, u, ctx):
    """Exact division of a Z-polynomial by (Z - u) when u is a root."""
    m = rows.shape[0] - 1
    out = np.zeros((m, ctx.d), dtype=np.int64)
    carry = k.strip(rows[m])
    for i in range(m - 1, -1, -1):
        out[i, : carry.shape[0]] = carry
        if i > 0:
            carry = k.add(k.strip(rows[i]), ctx.mulmod(carry, u), ctx.q)
    return out


def _horner_eval_rows(rows, u, ctx):
    n = rows.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    acc = k.strip(rows[n - 1])
    for i in range(n - 2, -1, -1):
        acc = k.add(ctx.mulmod(acc, u), k.strip(rows[i]), ctx.q)
    return acc


def interval_polynomial_naive(h, pair, table, lo, hi):
    """Reference term-by-term interval product: the straightforward
    nested-loop implementation over public polynomial operations, used as
    the baseline in benchmarks and as a cross-check in tests."""
    _require_modulus(h)
    if not 0 <= lo <= hi < pair.size:
        raise IndexError(f"interval [{lo}, {hi}] out of range")
    reduced = {}
    for u, poly in table.entries.items():
        reduced[u] = poly % h
    acc = FieldPoly.one(h.field)
    for i in range(lo, hi + 1):
        s, t = enumerate_index(pair, i)
        if s == t:
            continue
        acc = (acc * (reduced[s] - reduced[t])) % h
    return acc


# ---------------------------------------------------------------------------
# smooth-degree distinct-degree factorization (deterministic, small multiset)


def _log_base(n):
    """log n with base 2, floored at 2, as used in the randomized bounds."""
    return max(2, math.ceil(math.log2(max(n, 2))))


def _compose_power(base, mult, ctx):
    """From X^(q^a) mod h compute X^(q^(a*mult)) mod h (composition ladder)."""
    if mult < 1:
        raise ValueError("multiplier must be positive")
    acc = None
    doubling = base
    bits = mult.bit_length()
    for i in range(bits):
        if (mult >> i) & 1:
            acc = doubling.copy() if acc is None else _modcomp_arr(doubling, acc, ctx)
        if i + 1 < bits:
            doubling = _modcomp_arr(doubling, doubling, ctx)
    return acc


def _cofactor_powers(primes, ctx, xq):
    """{r: X^(q^(P/r)) mod h} for each distinct r in the prime multiset.

    Composition multiplies q-power exponents only through repetition, so
    P/r is reached from a shared suffix chain S_k = X^(q^(prod of primes
    from position k)) by one composition ladder over the integer prefix
    product.  Scanning the multiset in descending order keeps those
    prefix products small at each first occurrence.
    """
    desc = sorted(primes, reverse=True)
    m = len(desc)
    suffix = [None] * (m + 1)  # suffix[k] = X^(q^(prod of desc[k:]))
    suffix[m] = _frobenius_power_arr(ctx, 1, xq)
    for i in range(m - 1, -1, -1):
        suffix[i] = _compose_power(suffix[i + 1], desc[i], ctx)
    out = {}
    prefix_product = 1
    for i, r in enumerate(desc):
        if r not in out:
            base = suffix[i + 1]
            out[r] = (
                base.copy() if prefix_product == 1 else _compose_power(base, prefix_product, ctx)
            )
        prefix_product *= r
    return out


def _gcd_with_frobenius_diff(w_arr, power_arr, q):
    """gcd(power - X, w) monic."""
    diff = k.sub(power_arr, np.array([0, 1], dtype=np.int64), q)
    if diff.shape[0] == 0:
        return w_arr.copy()
    return k.gcd_monic(diff, w_arr, q)


def ddf_smooth_small(w, primes):
    """Distinct-degree factorization of w when its irreducible degrees all
    divide the product of the given prime multiset.

    Recursive: strip the exact-degree-P part (P = product of the multiset)
    by removing everything whose degree divides some P/r, pick the largest
    piece, and recurse with a smaller polynomial or a smaller multiset.
    The picked piece always has degree >= deg(w)/(|primes|+1) (pigeonhole);
    that bound is asserted on every iteration.

    deg = 1 and single-prime base cases are immediate, except that a
    single-prime multiset {p} may still hide linear factors (1 divides p),
    which are split off with one gcd first.
    """
    field = w.field
    buckets = {}
    _smooth_small_rec(w.arr(), tuple(sorted(primes)), field.q, buckets, None)
    return DistinctDegreeFactorization(
        field, {d: FieldPoly.from_arr(field, a) for d, a in buckets.items()}
    )


def _smooth_small_rec(w_arr, primes, q, buckets, xq_parent):
    dw = w_arr.shape[0] - 1
    if dw <= 0:
        return
    if dw == 1:
        _bucket_mul(buckets, 1, w_arr, q)
        return
    ctx = k.ModContext(w_arr, q)
    xq = ctx.rem(xq_parent) if xq_parent is not None else _x_power_q_arr(ctx)
    if len(primes) == 0:
        # product of the empty multiset is 1: every degree divides 1
        _bucket_mul(buckets, 1, w_arr, q)
        return
    if len(primes) == 1:
        r = primes[0]
        linear = _gcd_with_frobenius_diff(w_arr, xq, q)
        rest, rem = k.divrem(w_arr, linear, q)
        if rem.shape[0] != 0:
            raise ContractViolationError("linear part does not divide the input")
        if linear.shape[0] > 1:
            _bucket_mul(buckets, 1, linear, q)
        drest = rest.shape[0] - 1
        if drest > 0:
            if drest % r != 0:
                raise ContractViolationError(
                    f"degree {drest} leftover is not a multiple of the prime {r}"
                )
            _bucket_mul(buckets, r, rest, q)
        return
    P = math.prod(primes)
    powers = _cofactor_powers(primes, ctx, xq)
    pieces = []  # (poly, primes-after) candidates, deterministic order
    w1 = w_arr.copy()
    per_r = []
    for r in sorted(powers):
        wr = _gcd_with_frobenius_diff(w_arr, powers[r], q)
        per_r.append((r, wr))
        if wr.shape[0] > 1 and w1.shape[0] > 1:
            g = k.gcd_monic(w1, wr, q)
            if g.shape[0] > 1:
                w1, rem = k.divrem(w1, g, q)
                if rem.shape[0] != 0:
                    raise ContractViolationError("stripping failed to divide")
    best_arr, best_primes, best_is_whole_part = w1, primes, True
    for r, wr in per_r:
        if wr.shape[0] > best_arr.shape[0]:
            idx = primes.index(r)
            best_arr, best_primes, best_is_whole_part = (
                wr,
                primes[:idx] + primes[idx + 1 :],
                False,
            )
    STATS["pigeonhole_checks"] += 1
    if (best_arr.shape[0] - 1) * (len(primes) + 1) < dw:
        raise ContractViolationError(
            f"pigeonhole bound violated: best degree {best_arr.shape[0] - 1} "
            f"for input degree {dw} with {len(primes)} primes"
        )
    if best_is_whole_part:
        if best_arr.shape[0] > 1:
            _bucket_mul(buckets, P, best_arr, q)
    else:
        _smooth_small_rec(best_arr, best_primes, q, buckets, xq)
    if best_arr.shape[0] - 1 < dw:
        rest, rem = k.divrem(w_arr, best_arr, q)
        if rem.shape[0] != 0:
            raise ContractViolationError("selected piece does not divide the input")
        _smooth_small_rec(rest, primes, q, buckets, xq)


def _bucket_mul(buckets, deg, arr, q):
    if arr.shape[0] <= 1:
        return
    cur = buckets.get(deg)
    buckets[deg] = arr if cur is None else k.mul(cur, arr, q)


# ---------------------------------------------------------------------------
# randomized smooth DDF


def random_subset_split(w, primes, rng, max_attempts=None):
    """Try to split w by the Frobenius difference gcd of a random subset.

    Picks a uniformly random subset of ceil(p*|primes|) multiset positions
    with p = (1/2)^(1/log2(deg w)), computes w' = gcd(X^(q^P') - X, w) for
    P' the subset product, and accepts when deg w' >= deg(w)/8.  Retries a
    bounded number of times; returns (w', subset) or None when the retry
    budget is exhausted.
    """
    primes = tuple(sorted(primes))
    d = w.degree
    logn = _log_base(d)
    if len(primes) < 4 * logn * logn:
        raise ValueError(
            f"prime multiset too small: {len(primes)} < 4*log^2 = {4 * logn * logn}"
        )
    p = 0.5 ** (1.0 / logn)
    m = math.ceil(p * len(primes))
    if max_attempts is None:
        max_attempts = math.ceil(8 * math.log(64 * d))
    ctx = k.ModContext(w.arr(), w.field.q)
    xq = _x_power_q_arr(ctx)
    for _ in range(max_attempts):
        chosen = rng.sample_indices(len(primes), m)
        subset = tuple(sorted(primes[i] for i in chosen))
        exponent = math.prod(subset)
        power = _frobenius_power_arr(ctx, exponent, xq)
        w_sub = _gcd_with_frobenius_diff(w.arr(), power, w.field.q)
        if (w_sub.shape[0] - 1) * 8 >= d:
            return FieldPoly.from_arr(w.field, w_sub), subset
    return None


def ddf_smooth_randomized(w, primes, rng):
    """Las Vegas distinct-degree factorization for smooth-degree inputs.

    Correct output regardless of the random draws: small multisets go to
    the deterministic routine, random subset splits shrink either the
    degree or the multiset, and an exhausted retry budget falls back to
    the deterministic routine on the full multiset.
    """
    field = w.field
    primes = tuple(sorted(primes))
    d = w.degree
    if d <= 0:
        return DistinctDegreeFactorization(field, {})
    if d == 1:
        return DistinctDegreeFactorization(field, {1: w.monic()})
    logn = _log_base(d)
    if len(primes) <= 4 * logn * logn:
        return ddf_smooth_small(w, primes)
    got = random_subset_split(w, primes, rng)
    if got is None:
        return ddf_smooth_small(w, primes)
    w_sub, subset = got
    if w_sub.degree == d:
        return ddf_smooth_randomized(w, subset, rng.fork(1))
    rest = w // w_sub
    left = ddf_smooth_randomized(w_sub, subset, rng.fork(1))
    right = ddf_smooth_randomized(rest, primes, rng.fork(2))
    return _merge_ddf(left, right)


def _merge_ddf(a, b):
    factors = dict(a.factors)
    for deg, poly in b.factors.items():
        cur = factors.get(deg)
        factors[deg] = poly if cur is None else cur * poly
    return DistinctDegreeFactorization(a.field, factors)


# ---------------------------------------------------------------------------
# the recursive-splitting driver


def recursive_split(f, pair, rng, check_invariants=False):
    """Distinct-degree factorization of monic squarefree f using the
    divisor-set pair's interval polynomials.

    Bisects the index interval, splits f by the gcd with the lower half's
    interval product, and finishes single indices with the randomized
    smooth-degree routine on the difference's smooth prime multiset.
    Factors that survive every interval are reported as a contract
    violation, never dropped.
    """
    field = f.field
    if not f.is_monic() or f.degree < 1:
        raise ValueError("input must be monic of degree >= 1")
    if not pair.verified:
        raise ValueError("divisor-set pair is not verified")
    if f.degree > pair.n:
        raise ValueError(f"deg f = {f.degree} exceeds the pair's n = {pair.n}")
    deriv = f.derivative()
    if deriv.is_zero() or _gcd_or_one(f, deriv).degree > 0:
        raise ValueError("input is not squarefree")
    table = preprocess_powers(f, pair)
    raw = {u: p.arr() for u, p in table.entries.items()}
    state = _SplitState(field, pair, raw, rng, check_invariants)
    state.rec(f.arr(), 0, pair.size - 1)
    buckets = {deg: FieldPoly.from_arr(field, arr) for deg, arr in state.buckets.items()}
    return DistinctDegreeFactorization(field, buckets)


def _gcd_or_one(a, b):
    from .ffield import poly_gcd_monic

    if b.is_zero():
        return a.monic() if not a.is_zero() else a
    return poly_gcd_monic(a, b)


class _SplitState:
    def __init__(self, field, pair, table_arrays, rng, check_invariants):
        self.field = field
        self.pair = pair
        self.raw = table_arrays
        self.q = field.q
        self.rng = rng
        self.check = check_invariants
        self.buckets = {}

    def rec(self, g_arr, lo, hi):
        dg = g_arr.shape[0] - 1
        if dg <= 0:
            return
        ctx = k.ModContext(g_arr, self.q)
        tbl = _TableView(self.raw, ctx)
        if self.check:
            full = _interval_arr(ctx, self.pair, tbl, lo, hi)
            if full.shape[0] != 0 and k.gcd_monic(g_arr, full, self.q).shape[0] != g_arr.shape[0]:
                raise ContractViolationError(
                    f"recursion invariant broken on [{lo}, {hi}] at degree {dg}"
                )
        if lo == hi:
            self._base_case(g_arr, ctx, tbl, lo)
            return
        mid = (lo + hi) // 2
        lower = _interval_arr(ctx, self.pair, tbl, lo, mid)
        if lower.shape[0] == 0:
            w = g_arr  # interval product is 0 mod g: g divides it entirely
        else:
            w = k.gcd_monic(g_arr, lower, self.q)
        dw = w.shape[0] - 1
        if dw == 0:
            self.rec(g_arr, mid + 1, hi)
        elif dw == dg:
            self.rec(g_arr, lo, mid)
        else:
            rest, rem = k.divrem(g_arr, w, self.q)
            if rem.shape[0] != 0:
                raise ContractViolationError("gcd does not divide its argument")
            self.rec(w, lo, mid)
            self.rec(rest, mid + 1, hi)

    def _base_case(self, g_arr, ctx, tbl, index):
        s, t = enumerate_index(self.pair, index)
        dg = g_arr.shape[0] - 1
        if s == t:
            raise UncoveredFactorError(
                f"degree-{dg} factor reached the zero-difference index {index}"
            )
        diff = k.sub(tbl(s), tbl(t), self.q)
        w = g_arr if diff.shape[0] == 0 else k.gcd_monic(diff, g_arr, self.q)
        if w.shape[0] - 1 != dg:
            raise UncoveredFactorError(
                f"degree-{dg - (w.shape[0] - 1)} factor survived index {index}: "
                "the pair does not cover it"
            )
        primes = _smooth_multiset(pair_factorization(self.pair, index), dg)
        sub = ddf_smooth_randomized(
            FieldPoly.from_arr(self.field, g_arr), primes, self.rng.fork(index)
        )
        for deg, poly in sub.factors.items():
            cur = self.buckets.get(deg)
            self.buckets[deg] = (
                poly.arr().copy() if cur is None else k.mul(cur, poly.arr(), self.q)
            )


def _smooth_multiset(prime_factors, degree_bound):
    """Primes <= degree_bound, multiplicity capped at log_r(degree_bound):
    larger powers cannot divide any factor degree <= the bound."""
    counts = Counter(p for p in prime_factors if p <= degree_bound)
    out = []
    for r in sorted(counts):
        cap = 0
        power = r
        while power <= degree_bound:
            cap += 1
            power *= r
        out.extend([r] * min(counts[r], cap))
    return tuple(out)


# ---------------------------------------------------------------------------
# classic sequential DDF (the independent slow path)


def ddf_naive_oracle(f):
    """Sequential distinct-degree factorization: strip gcd(X^(q^i) - X, f)
    for i = 1, 2, ...; whatever survives past degree/2 is irreducible."""
    field = f.field
    if not f.is_monic() or f.degree < 1:
        raise ValueError("input must be monic of degree >= 1")
    q = field.q
    rem = f.arr().copy()
    buckets = {}
    ctx = k.ModContext(rem, q)
    x_power = _x_power_q_arr(ctx)  # X^(q^i) mod rem, starting at i = 1
    i = 1
    while rem.shape[0] - 1 >= 2 * i:
        g = _gcd_with_frobenius_diff(rem, x_power, q)
        if g.shape[0] > 1:
            buckets[i] = FieldPoly.from_arr(field, g)
            rem, r0 = k.divrem(rem, g, q)
            if r0.shape[0] != 0:
                raise ContractViolationError("stripping failed to divide")
            if rem.shape[0] - 1 == 0:
                break
            ctx = k.ModContext(rem, q)
            x_power = ctx.rem(x_power)
        i += 1
        if rem.shape[0] - 1 < 2 * i:
            break
        x_power = ctx.powmod(x_power, q)
    if rem.shape[0] - 1 > 0:
        buckets[rem.shape[0] - 1] = FieldPoly.from_arr(field, rem)
    return DistinctDegreeFactorization(field, buckets)


# ---------------------------------------------------------------------------
# full factorization pipeline


def squarefree_decomposition(f):
    """Monic squarefree decomposition in characteristic p: list of
    (part, multiplicity) with product(part^mult) = monic(f)."""
    field = f.field
    p = field.q
    f = f.monic()
    out = {}
    block = 1  # current Frobenius-block multiplier
    while f.degree > 0:
        deriv = f.derivative()
        if not deriv.is_zero():
            g = _gcd_or_one(f, deriv)
            h = f // g
            i = 1
            while h.degree > 0:
                gh = _gcd_or_one(h, g) if not g.is_zero() else FieldPoly.one(field)
                part = h // gh
                if part.degree > 0:
                    key = block * i
                    out[key] = out.get(key, FieldPoly.one(field)) * part
                h = gh
                if not g.is_zero() and not gh.is_zero():
                    g = g // gh
                i += 1
            f = g
            if f.degree == 0:
                break
        # here f is a p-th power: take the exact p-th root coefficientwise
        coeffs = f.coeffs
        if any(c and (idx % p) for idx, c in enumerate(coeffs)):
            raise ContractViolationError("polynomial with zero derivative is not a p-th power")
        f = FieldPoly(field, [coeffs[idx] for idx in range(0, len(coeffs), p)])
        block *= p
    return sorted(out.items(), key=lambda kv: kv[0])


def _equal_degree_factor(w, d, rng):
    """Split a product of degree-d irreducibles into the irreducibles."""
    field = w.field
    q = field.q
    if w.degree == d:
        return [w]
    ctx = k.ModContext(w.arr(), q)
    while True:
        a = np.array([rng.randbelow(q) for _ in range(w.degree)], dtype=np.int64)
        a = k.strip(a)
        if a.shape[0] <= 1:
            continue
        g = k.gcd_monic(a, w.arr(), q)
        if 1 < g.shape[0] < w.degree + 1:
            split = FieldPoly.from_arr(field, g)
        elif q % 2 == 1:
            e = (q**d - 1) // 2
            b = ctx.powmod(a, e)
            b = k.sub(b, np.array([1], dtype=np.int64), q)
            if b.shape[0] == 0:
                continue
            g = k.gcd_monic(b, w.arr(), q)
            if not 1 < g.shape[0] < w.degree + 1:
                continue
            split = FieldPoly.from_arr(field, g)
        else:
            # characteristic 2: trace map of a over F_{2^d}
            tr = a.copy()
            cur = a
            for _ in range(d - 1):
                cur = ctx.mulmod(cur, cur)
                tr = k.add(tr, cur, q)
            if tr.shape[0] == 0:
                continue
            g = k.gcd_monic(tr, w.arr(), q)
            if not 1 < g.shape[0] < w.degree + 1:
                continue
            split = FieldPoly.from_arr(field, g)
        rest = w // split
        return _equal_degree_factor(split, d, rng) + _equal_degree_factor(rest, d, rng)


def factor_full(f, rng, pair=None):
    """Complete irreducible factorization: squarefree decomposition, then
    recursive-splitting DDF per part, then equal-degree splitting.

    Returns a list of (irreducible monic FieldPoly, multiplicity), sorted
    by (degree, coefficients); the product over the list is monic(f).
    """
    from .divisor_sets import trivial_pair

    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = f.field
    result = Counter()
    if f.degree == 0:
        return []
    parts = squarefree_decomposition(f)
    for mult, part in parts:
        use_pair = pair if pair is not None else trivial_pair(part.degree)
        ddf = recursive_split(part, use_pair, rng.fork(mult))
        for d, bucket in ddf.factors.items():
            for irr in _equal_degree_factor(bucket, d, rng.fork(mult * 65537 + d)):
                result[irr] += mult
    out = sorted(result.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs))
    prod = FieldPoly.one(field)
    for poly, mult in out:
        for _ in range(mult):
            prod = prod * poly
    if prod != f.monic():
        raise ContractViolationError("factor product does not reconstruct the input")
    return out
