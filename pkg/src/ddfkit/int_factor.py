"""Deterministic integer factorization by recursive interval splitting
over a divisor-set pair, plus a Pollard-Strassen product-tree baseline.

The integer side mirrors the polynomial side: with A_i = |s_j - t_l| in
the order i = j + l*|S|, every integer up to n divides the product of the
A_i, so gcds against interval products recursively split the n-smooth
part of N into divisors of individual A_i, whose stored prime lists then
reveal the primes of N.  Differences are taken in absolute value and the
s == t indices contribute 1, exactly as in the polynomial products.

Everything here is deterministic: no randomness anywhere.
"""

import math
from bisect import bisect_right

import numpy as np

try:
    import gmpy2

    _HAVE_GMPY = True
except ImportError:  # pragma: no cover
    _HAVE_GMPY = False

from .divisor_sets import enumerate_index, pair_factorization, trivial_pair
from .errors import ContractViolationError
from .numutil import is_prime

# telemetry for the bench commands
COUNTS = {"interval_products": 0, "gcds": 0}


def reset_counts():
    for key in COUNTS:
        COUNTS[key] = 0


class IntegerFactorization:
    """Multiset of (prime, multiplicity); product reconstructs n."""

    def __init__(self, n, factors):
        self.n = int(n)
        clean = {}
        prod = 1
        for p, e in sorted(factors.items()):
            p, e = int(p), int(e)
            if e < 1:
                raise ValueError("multiplicities must be >= 1")
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            clean[p] = e
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors reconstruct {prod}, expected {self.n}")
        self.factors = clean

    def __eq__(self, other):
        return (
            isinstance(other, IntegerFactorization)
            and other.n == self.n
            and other.factors == self.factors
        )

    def __iter__(self):
        return iter(self.factors.items())

    def __repr__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors.items())
        return f"IntegerFactorization({self.n} = {body or 1})"


class PairDivisorList:
    """Pairs (index, divisor) with divisor | A_index and product = n0."""

    def __init__(self, pair, n0, entries):
        self.pair = pair
        self.n0 = int(n0)
        self.entries = tuple((int(i), int(d)) for i, d in entries)
        prod = 1
        for i, d in self.entries:
            a = pair.difference_at(i)
            if d < 1 or a % d != 0:
                raise ContractViolationError(f"divisor {d} does not divide A_{i} = {a}")
            prod *= d
        if prod != self.n0:
            raise ContractViolationError(
                f"divisor product {prod} does not reconstruct {self.n0}"
            )

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return f"PairDivisorList(n0={self.n0}, entries={list(self.entries)})"


# ---------------------------------------------------------------------------
# residues and interval products


def int_preprocess_residues(d, pair):
    """u mod d for every u in S union T: per-term bases and steps reduced
    once, then successive modular additions, then cross-term modular sums."""
    if d < 1:
        raise ValueError("modulus must be positive")
    out = {}
    if max(pair.s_set.max_element, pair.t_set.max_element) < 2**62:
        for u in pair.s_enum:
            out.setdefault(u, u % d)
        for u in pair.t_enum:
            out.setdefault(u, u % d)
        return out
    for gap in (pair.s_set, pair.t_set):
        per_term = []
        for term in gap.terms:
            base = term.base % d
            step = term.step % d
            vals = []
            cur = term.base
            cur_res = base
            for j in range(term.length):
                if j > 0:
                    cur += term.step
                    cur_res = (cur_res + step) % d
                vals.append((cur, cur_res))
            per_term.append(vals)

        def rec(idx, value, res):
            if idx == len(per_term):
                out.setdefault(value, res)
                return
            for u, r in per_term[idx]:
                rec(idx + 1, value + u, (res + r) % d)

        rec(0, 0, 0)
    return out


_DIRECT_MAX = 4096  # below this many indices a straight product is cheaper
_MIDDLE_BULK_MIN = 16


def int_interval_product(d, pair, residues, lo, hi):
    """Product of A_i mod d over pair indices lo..hi, in [0, d)."""
    if d < 1:
        raise ValueError("modulus must be positive")
    if not 0 <= lo <= hi < pair.size:
        raise IndexError(f"interval [{lo}, {hi}] out of range")
    if d == 1:
        return 0
    COUNTS["interval_products"] += 1
    if hi - lo + 1 <= _DIRECT_MAX:
        return _direct_product(pair, d, lo, hi)
    return _partition_product(d, pair, residues, lo, hi)


def _direct_product(pair, d, lo, hi):
    diffs = pair.differences()
    if isinstance(diffs, np.ndarray):
        vals = diffs[lo : hi + 1]
        vals = np.where(vals == 0, 1, vals)
        return _fold_mod(vals, d)
    acc = 1
    for v in diffs[lo : hi + 1]:
        if v:
            acc = acc * v % d
    return acc


def _fold_mod(vals, d):
    """Product of an int64 array mod d via chunked folding."""
    if vals.size == 0:
        return 1 % d
    if int(vals.max()) >= d:
        vals = vals % d
    while vals.size > 16:
        maxv = int(vals.max())
        if maxv <= 1:
            return 0 if (vals == 0).any() else 1 % d
        per = 62 // maxv.bit_length()  # factors per int64 chunk
        if per < 2 or vals.size < per:
            break
        m = (vals.size // per) * per
        head = vals[:m].reshape(-1, per).prod(axis=1) % d
        vals = np.concatenate([head, vals[m:]]) if vals.size > m else head
    acc = 1
    for v in vals.tolist():
        acc = acc * v % d
    return acc


def _partition_product(d, pair, residues, lo, hi):
    if residues is None:
        residues = int_preprocess_residues(d, pair)
    ns = len(pair.s_enum)
    a0, a1 = lo % ns, lo // ns
    b0, b1 = hi % ns, hi // ns
    if a1 == b1:
        return _row_range_product(d, pair, residues, a1, a0, b0)
    acc = _row_range_product(d, pair, residues, a1, a0, ns - 1)
    mid_lo, mid_hi = a1 + 1, b1 - 1
    if mid_hi >= mid_lo:
        if mid_hi - mid_lo + 1 >= _MIDDLE_BULK_MIN and ns >= _MIDDLE_BULK_MIN:
            acc = acc * _middle_bulk(d, pair, residues, mid_lo, mid_hi) % d
        else:
            for row in range(mid_lo, mid_hi + 1):
                acc = acc * _row_range_product(d, pair, residues, row, 0, ns - 1) % d
    return acc * _row_range_product(d, pair, residues, b1, 0, b0) % d


def _row_range_product(d, pair, residues, row, j_lo, j_hi):
    ns = len(pair.s_enum)
    if isinstance(pair.differences(), np.ndarray):
        return _direct_product(pair, d, row * ns + j_lo, row * ns + j_hi)
    t_val = pair.t_enum[row]
    acc = 1
    for j in range(j_lo, j_hi + 1):
        s_val = pair.s_enum[j]
        if s_val == t_val:
            continue
        acc = acc * (abs(s_val - t_val) % d) % d
    return acc


def _middle_bulk(d, pair, residues, row_lo, row_hi):
    """Bulk product over whole rows: p(Z) = prod(Z - t) over the middle
    rows, multipoint-evaluated at every s, with a sign fix to turn the
    signed products into products of absolute differences."""
    t_vals = [pair.t_enum[r] for r in range(row_lo, row_hi + 1)]
    t_res = [residues[t] for t in t_vals]
    p_coeffs = _zroot_product(t_res, d)
    s_vals = list(pair.s_enum)
    t_sorted = sorted(t_vals)
    t_count = {}
    for t in t_vals:
        t_count[t] = t_count.get(t, 0) + 1
    plain_idx = [j for j, s in enumerate(s_vals) if t_count.get(s, 0) == 0]
    evals = {}
    if plain_idx:
        pts = [residues[s_vals[j]] for j in plain_idx]
        for j, v in zip(plain_idx, _zmultipoint(p_coeffs, pts, d)):
            evals[j] = v
    for j, s in enumerate(s_vals):
        c = t_count.get(s, 0)
        if c == 0:
            continue
        coeffs = p_coeffs
        for _ in range(c):
            coeffs = _zdeflate(coeffs, residues[s], d)
        evals[j] = _zhorner(coeffs, residues[s], d)
    acc = 1
    negatives = 0
    for j, s in enumerate(s_vals):
        acc = acc * evals[j] % d
        # t values strictly above s flip the sign of (s - t)
        above = len(t_vals) - bisect_right(t_sorted, s)
        negatives += above
    if negatives & 1:
        acc = (-acc) % d
    return acc


# -- dense polynomials over Z/dZ (minimal toolkit for the products above)


def _zmul(a, b, d):
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return []
    if la * lb <= 160 or not _HAVE_GMPY:
        out = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return [c % d for c in out]
    if min(la, lb) < 24 and (d - 1) * (d - 1) * min(la, lb) < 2**62 and max(la, lb) < 2**20:
        return (np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % d).tolist()
    need = 2 * (d - 1).bit_length() + min(la, lb).bit_length()
    prod = gmpy2.pack([int(x) for x in a], need) * gmpy2.pack([int(x) for x in b], need)
    return [int(x) % d for x in gmpy2.unpack(prod, need)][: la + lb - 1]


def _zmul_trunc(a, b, k, d):
    return _zmul(a[:k], b[:k], d)[:k]


def _zseries_inv(f, k, d):
    # constant term must be 1 (our reversed moduli are monic)
    if f[0] % d != 1:
        raise ValueError("series inverse needs unit constant term 1")
    out = [1]
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        t = _zmul_trunc(f[:prec], out, prec, d)
        t = [(-x) % d for x in t]
        t[0] = (t[0] + 2) % d
        out = _zmul_trunc(out, t, prec, d)
    return out[:k]


def _zroot_product(roots, d):
    n = len(roots)
    if n <= 8:
        out = [1]
        for r in roots:
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] = (nxt[i + 1] + c) % d
                nxt[i] = (nxt[i] - c * r) % d
            out = nxt
        return out
    half = n // 2
    return _zmul(_zroot_product(roots[:half], d), _zroot_product(roots[half:], d), d)


def _zrem(a, m, minv, d):
    la, lm = len(a), len(m)
    if la < lm:
        return list(a)
    k = la - lm + 1
    if minv is None:
        return _zrem_schoolbook(a, m, d)
    qr = _zmul_trunc(list(reversed(a)), minv[:k], k, d)
    qr += [0] * (k - len(qr))
    quo = list(reversed(qr))
    low = _zmul_trunc(quo, m, lm - 1, d)
    out = [(a[i] - (low[i] if i < len(low) else 0)) % d for i in range(lm - 1)]
    return out


def _zrem_schoolbook(a, m, d):
    # m monic; in-place elimination
    r = list(a)
    lm = len(m)
    body = m[: lm - 1]
    for i in range(len(r) - lm, -1, -1):
        c = r[i + lm - 1] % d
        if c:
            for j, y in enumerate(body):
                if y:
                    r[i + j] = (r[i + j] - c * y) % d
    del r[lm - 1 :]
    return r


_Z_SCHOOLBOOK_REM = 40  # divisor length below which schoolbook wins


def _zhorner(coeffs, x, d):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % d
    return acc


def _zdeflate(coeffs, root, d):
    """Exact division by (Z - root) when root is a root."""
    m = len(coeffs) - 1
    out = [0] * m
    carry = coeffs[m]
    for i in range(m - 1, -1, -1):
        out[i] = carry
        if i > 0:
            carry = (coeffs[i] + carry * root) % d
    return out


_VEC_HORNER_MAX_D = 1 << 40  # dual-limb int64 Horner stays exact below this


def _zmultipoint(coeffs, pts, d):
    n = len(pts)
    if n == 0:
        return []
    if n <= 8 or len(coeffs) <= 2:
        return [_zhorner(coeffs, x, d) for x in pts]
    if d <= _VEC_HORNER_MAX_D and len(coeffs) <= 8192:
        return _zhorner_vec(coeffs, pts, d)
    tree = _ztree(pts, d)
    return _zdescend(_zrem_node(coeffs, tree, d), tree, d)


def _zhorner_vec(coeffs, pts, d):
    """Horner at many points at once; exact for d <= 2**40 by splitting the
    accumulator into 20-bit limbs so int64 products never overflow."""
    p = np.array(pts, dtype=np.int64) % d
    p_hi = (p << 20) % d
    acc = np.full(p.shape[0], coeffs[-1] % d, dtype=np.int64)
    for c in coeffs[-2::-1]:
        hi = acc >> 20
        lo = acc & 0xFFFFF
        acc = (hi * p_hi + lo * p + c) % d
    return acc.tolist()


def _zrem_node(coeffs, node, d):
    m = node["m"]
    if len(coeffs) < len(m):
        return list(coeffs)
    if len(m) <= _Z_SCHOOLBOOK_REM:
        return _zrem_schoolbook(coeffs, m, d)
    kneed = len(coeffs) - len(m) + 1
    if node["inv"] is None or len(node["inv"]) < kneed:
        node["inv"] = _zseries_inv(list(reversed(m)), kneed, d)
    return _zrem(coeffs, m, node["inv"], d)


def _ztree(pts, d):
    n = len(pts)
    if n <= 8:
        return {"m": _zroot_product(pts, d), "children": None, "pts": pts, "inv": None}
    half = n // 2
    left = _ztree(pts[:half], d)
    right = _ztree(pts[half:], d)
    return {
        "m": _zmul(left["m"], right["m"], d),
        "children": (left, right),
        "pts": pts,
        "inv": None,
    }


def _zdescend(coeffs, node, d):
    if node["children"] is None:
        return [_zhorner(coeffs, x, d) for x in node["pts"]]
    out = []
    for child in node["children"]:
        out.extend(_zdescend(_zrem_node(coeffs, child, d), child, d))
    return out


# ---------------------------------------------------------------------------
# recursive splitting


def int_recursive_split(N, pair):
    """Split N0 = gcd(prod A_i, N) into divisors of individual A_i.

    N0 is computed as gcd(full interval product mod N, N): the full
    product is astronomically large, but gcd(x mod N, N) = gcd(x, N).
    Requires a verified pair with a prime-factorization source.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    if not pair.verified:
        raise ValueError("divisor-set pair is not verified")
    if not pair.prefactored:
        raise ValueError("pair lacks factorization tables (prefactored source needed)")
    if N == 1:
        return PairDivisorList(pair, 1, [])
    full = int_interval_product(N, pair, None, 0, pair.size - 1)
    n0 = math.gcd(full, N)
    entries = []
    if n0 > 1:
        _split_rec(pair, n0, 0, pair.size - 1, entries, _LazyResidues(pair, n0))
    return PairDivisorList(pair, n0, entries)


class _LazyResidues:
    """Residue map for one modulus, built on first use and shared across
    recursion nodes that keep the same divisor."""

    __slots__ = ("pair", "d", "_map")

    def __init__(self, pair, d):
        self.pair = pair
        self.d = d
        self._map = None

    def get(self):
        if self._map is None:
            self._map = int_preprocess_residues(self.d, self.pair)
        return self._map


def _split_rec(pair, d, lo, hi, entries, residues):
    if d == 1:
        return
    if lo == hi:
        a = pair.difference_at(lo)
        if a % d != 0:
            raise ContractViolationError(
                f"invariant broken: {d} does not divide A_{lo} = {a}"
            )
        entries.append((lo, d))
        return
    mid = (lo + hi) // 2
    COUNTS["interval_products"] += 1
    if hi - lo + 1 <= _DIRECT_MAX:
        prod = _direct_product(pair, d, lo, mid)
    else:
        prod = _partition_product(d, pair, residues.get(), lo, mid)
    COUNTS["gcds"] += 1
    lower = math.gcd(prod, d)
    if lower == 1:
        _split_rec(pair, d, mid + 1, hi, entries, residues)
    elif lower == d:
        _split_rec(pair, d, lo, mid, entries, residues)
    else:
        _split_rec(pair, lower, lo, mid, entries, _LazyResidues(pair, lower))
        _split_rec(pair, d // lower, mid + 1, hi, entries, _LazyResidues(pair, d // lower))


def factor_integer(N, pair=None):
    """Prime factorization of N via the divisor-set framework.

    With pair=None a trivial pair for floor(sqrt(N)) is built.  An
    explicit pair must be verified, carry factorizations, and have
    n >= floor(sqrt(N)).  Primes found in the divisor list are trial
    divided to full multiplicity; at most one prime cofactor above the
    pair's n can remain and is appended after a primality check.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return IntegerFactorization(1, {})
    root = math.isqrt(N)
    if pair is None:
        pair = trivial_pair(max(root, 1))
    elif pair.n < root:
        raise ValueError(f"pair covers n={pair.n} < floor(sqrt(N))={root}")
    divisors = int_recursive_split(N, pair)
    found = set()
    for idx, dv in divisors:
        for p in set(pair_factorization(pair, idx)):
            if dv % p == 0:
                found.add(p)
    factors = {}
    rem = N
    for p in sorted(found):
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        if e:
            factors[p] = e
    if rem > 1:
        if not is_prime(rem):
            raise ContractViolationError(
                f"cofactor {rem} of {N} is composite: the divisor pair missed a prime"
            )
        factors[rem] = factors.get(rem, 0) + 1
    result = IntegerFactorization(N, factors)
    return result


# ---------------------------------------------------------------------------
# Pollard-Strassen baseline


def pollard_strassen_oracle(N):
    """Deterministic factorization by product-tree blocks of consecutive
    integers: with c = ceil(N^(1/4)), the values prod(x + j, j = 1..c) at
    x = k*c cover gcd probes of 1..c^2 >= sqrt(N); a hit block is binary
    searched via prefix products.  Output is identical to trial division."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    factors = {}
    rem = N
    while rem > 1:
        p = _smallest_prime_factor_ps(rem)
        e = 0
        while rem % p == 0:
            rem //= p
            e += 1
        factors[p] = factors.get(p, 0) + e
    return IntegerFactorization(N, factors)


def _smallest_prime_factor_ps(N):
    if N % 2 == 0:
        return 2
    root4 = math.isqrt(math.isqrt(N))
    c = root4 + 1  # c*c >= floor(sqrt(N))
    # block 0 sequentially: most inputs have a factor <= c
    for j in range(2, c + 1):
        g = math.gcd(j, N)
        if g > 1:
            return _first_prime_of(g, N)
    # remaining blocks via one multipoint evaluation
    poly = _rising_product_poly(c, N)
    points = [(k * c) % N for k in range(1, c)]
    values = _zmultipoint(poly, points, N) if points else []
    for k, v in enumerate(values, start=1):
        COUNTS["gcds"] += 1
        if math.gcd(v, N) > 1:
            return _search_block(k, c, N)
    if not is_prime(N):
        raise ContractViolationError(f"no factor of composite {N} found up to {c * c}")
    return N


def _rising_product_poly(c, N):
    """Coefficients of prod_{j=1..c} (X + j) over Z/NZ (product tree)."""
    leaves = [[j % N, 1] for j in range(1, c + 1)]
    while len(leaves) > 1:
        nxt = []
        for i in range(0, len(leaves) - 1, 2):
            nxt.append(_zmul(leaves[i], leaves[i + 1], N))
        if len(leaves) % 2:
            nxt.append(leaves[-1])
        leaves = nxt
    return leaves[0] if leaves else [1]


def _search_block(k, c, N):
    """Binary search the smallest element of (k*c, k*c + c] sharing a
    factor with N, using monotone prefix-product gcds."""
    base = k * c
    prefix = []
    acc = 1
    for j in range(1, c + 1):
        acc = acc * ((base + j) % N) % N
        prefix.append(acc)
    lo_i, hi_i = 0, c - 1
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if math.gcd(prefix[mid], N) > 1:
            hi_i = mid
        else:
            lo_i = mid + 1
    element = base + lo_i + 1
    g = math.gcd(element, N)
    if g == 1:
        raise ContractViolationError("prefix gcd hit without a sharing element")
    return _first_prime_of(g, N)


def _first_prime_of(g, N):
    # the first sharing element equals the smallest prime factor itself in
    # the main scan; kept defensive for the composite-gcd corner
    if is_prime(g):
        return g
    p = _smallest_prime_factor_ps(g)
    return p
