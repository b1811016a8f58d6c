"""Construction, verification, combination and search of divisor-property
set pairs (S, T).

A pair declares parameters (n, alpha, beta) and two generalized arithmetic
progressions.  It satisfies the n-divisor property when every i in [1, n]
divides |s - t| for some s in S, t in T with s != t.  Pairs with s == t
are excluded from coverage (a zero difference is divisible by everything
and stalls the downstream recursion); they contribute the constant 1 to
interval products instead.
"""

import functools
import itertools
import json
import math
from fractions import Fraction

import numpy as np

from .errors import ContractViolationError, ResourceBudgetError
from .numutil import ceil_pow, factor_counter, floor_pow, primes_up_to

_LOG2_E = 1.4426950408889634


class ArithProgression:
    """{base + i*step : 0 <= i < length} with step > 0, base >= 0."""

    __slots__ = ("base", "step", "length")

    def __init__(self, base, step, length):
        base, step, length = int(base), int(step), int(length)
        if step <= 0:
            raise ValueError("step must be positive")
        if length <= 0:
            raise ValueError("length must be positive")
        if base < 0:
            raise ValueError("base must be nonnegative")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "length", length)

    def __setattr__(self, *_):
        raise AttributeError("ArithProgression is immutable")

    def elements(self):
        return [self.base + i * self.step for i in range(self.length)]

    @property
    def max_element(self):
        return self.base + (self.length - 1) * self.step

    def __eq__(self, other):
        return (
            isinstance(other, ArithProgression)
            and (other.base, other.step, other.length) == (self.base, self.step, self.length)
        )

    def __hash__(self):
        return hash((self.base, self.step, self.length))

    def __repr__(self):
        return f"ArithProgression(base={self.base}, step={self.step}, length={self.length})"


class GenArithProgression:
    """Sumset of arithmetic progressions; elements come from the product
    enumeration (first term slowest), counted with multiplicity even when
    sums collide."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        terms = tuple(terms)
        if not terms:
            raise ValueError("need at least one progression term")
        for t in terms:
            if not isinstance(t, ArithProgression):
                raise TypeError("terms must be ArithProgression instances")
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *_):
        raise AttributeError("GenArithProgression is immutable")

    @property
    def cardinality(self):
        out = 1
        for t in self.terms:
            out *= t.length
        return out

    @property
    def max_element(self):
        return sum(t.max_element for t in self.terms)

    def enumerate_elements(self):
        """All sums in product order; length == cardinality."""
        out = []
        for combo in itertools.product(*[t.elements() for t in self.terms]):
            out.append(sum(combo))
        return out

    def __eq__(self, other):
        return isinstance(other, GenArithProgression) and other.terms == self.terms

    def __repr__(self):
        return f"GenArithProgression({list(self.terms)!r})"


class DivisorSetPair:
    """A declared (S, T, n, alpha, beta) pair with explicit enumerations and
    an optional per-difference prime-factorization source."""

    def __init__(
        self,
        s_set,
        t_set,
        n,
        alpha,
        beta,
        factor_provider=None,
        factor_table=None,
        _verified=False,
    ):
        n = int(n)
        if n < 1:
            raise ValueError("n must be positive")
        alpha = Fraction(alpha)
        beta = Fraction(beta)
        if alpha <= 0 or beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if factor_provider not in (None, "trial", "table"):
            raise ValueError(f"unknown factorization provider {factor_provider!r}")
        if factor_provider == "table" and factor_table is None:
            raise ValueError("table provider needs a factorization table")
        self.s_set = s_set
        self.t_set = t_set
        self.n = n
        self.alpha = alpha
        self.beta = beta
        self.s_enum = tuple(s_set.enumerate_elements())
        self.t_enum = tuple(t_set.enumerate_elements())
        card_bound = ceil_pow(n, beta) + 1
        if len(self.s_enum) > card_bound or len(self.t_enum) > card_bound:
            raise ValueError(
                f"cardinality exceeds n^beta bound: |S|={len(self.s_enum)}, "
                f"|T|={len(self.t_enum)}, allowed {card_bound}"
            )
        bit_bound = math.ceil(math.exp(float(alpha) * math.log(n)) * _LOG2_E) + 1
        max_el = max(self.s_set.max_element, self.t_set.max_element)
        if max_el.bit_length() > bit_bound:
            raise ValueError(
                f"element magnitude exceeds exp(n^alpha) bound: "
                f"{max_el.bit_length()} bits > {bit_bound} allowed"
            )
        self._factor_provider = factor_provider
        self._factor_table = dict(factor_table) if factor_table else None
        self._value_factors = {}
        self._verified = bool(_verified)
        self._diffs = None

    @property
    def size(self):
        """Number of index pairs |S| * |T|."""
        return len(self.s_enum) * len(self.t_enum)

    @property
    def verified(self):
        return self._verified

    @property
    def prefactored(self):
        return self._factor_provider is not None

    def difference_at(self, i):
        s, t = enumerate_index(self, i)
        return abs(s - t)

    def differences(self):
        """|s - t| for every pair index, in index order (cached numpy array
        when magnitudes fit in int64, else a python list)."""
        if self._diffs is None:
            if max(max(self.s_enum), max(self.t_enum)) < 2**62:
                s = np.array(self.s_enum, dtype=np.int64)
                t = np.array(self.t_enum, dtype=np.int64)
                self._diffs = np.abs(s[None, :] - t[:, None]).ravel()
            else:
                self._diffs = [
                    abs(s - t) for t in self.t_enum for s in self.s_enum
                ]
        return self._diffs

    def __repr__(self):
        return (
            f"DivisorSetPair(n={self.n}, |S|={len(self.s_enum)}, "
            f"|T|={len(self.t_enum)}, verified={self._verified})"
        )


def enumerate_index(pair, i):
    """Pair index -> (s_j, t_l) with j = i mod |S|, l = i div |S|."""
    if not 0 <= i < pair.size:
        raise IndexError(f"pair index {i} out of range [0, {pair.size})")
    ns = len(pair.s_enum)
    return pair.s_enum[i % ns], pair.t_enum[i // ns]


def pair_factorization(pair, i):
    """Prime factors (with multiplicity, sorted) of |s - t| at pair index i.

    Reads the stored table when present, else the pair's provider, else
    plain trial division.  Raises for s == t (no factorization of zero).
    """
    s, t = enumerate_index(pair, i)
    if s == t:
        raise ValueError(f"pair index {i} has s == t; zero has no factorization")
    if pair._factor_table is not None and i in pair._factor_table:
        return tuple(pair._factor_table[i])
    value = abs(s - t)
    if value == 1:
        return ()
    cached = pair._value_factors.get(value)
    if cached is None:
        cached = tuple(_flat_factors(value))
        pair._value_factors[value] = cached
    return cached


def _flat_factors(value):
    out = []
    for p, e in factor_counter(value).items():
        out.extend([p] * e)
    return sorted(out)


# ---------------------------------------------------------------------------
# verification


class VerificationReport:
    """Outcome of a divisor-property check.

    holds                -- True iff every i in [1, n] is covered
    uncovered            -- tuple of uncovered i (empty when holds)
    witness(i)           -- smallest pair index whose difference i divides
    witness_map          -- dict i -> witness index, built lazily
    """

    def __init__(self, pair, uncovered, first_index_of_value, max_diff):
        self.pair = pair
        self.n = pair.n
        self.uncovered = tuple(uncovered)
        self.holds = not self.uncovered
        self._first = first_index_of_value  # value -> smallest pair index
        self._max_diff = max_diff
        self._witness_map = None

    def witness(self, i):
        """Smallest pair index (enumeration order) with i | |s - t|, s != t."""
        if not 1 <= i <= self.n:
            raise IndexError(f"i must be in [1, {self.n}]")
        best = None
        if self._max_diff // i < len(self._first):
            for v in range(i, self._max_diff + 1, i):
                idx = self._first.get(v)
                if idx is not None and (best is None or idx < best):
                    best = idx
        else:
            for v, idx in self._first.items():
                if v % i == 0 and (best is None or idx < best):
                    best = idx
        return best

    @property
    def witness_map(self):
        if self._witness_map is None:
            self._witness_map = {
                i: w for i in range(1, self.n + 1) if (w := self.witness(i)) is not None
            }
        return self._witness_map

    def __repr__(self):
        state = "holds" if self.holds else f"fails ({len(self.uncovered)} uncovered)"
        return f"VerificationReport(n={self.n}, {state})"


def verify_divisor_property(pair):
    """Check the n-divisor property of the difference set {|s - t| : s != t}.

    Returns a VerificationReport; a successful check marks the pair
    verified.  Coverage failures are reported, never raised.
    """
    diffs = pair.differences()
    if isinstance(diffs, np.ndarray):
        report = _verify_numpy(pair, diffs)
    else:
        report = _verify_python(pair, diffs)
    if report.holds:
        pair._verified = True
        _necessity_check(pair)
    return report


def _verify_numpy(pair, diffs):
    max_diff = int(diffs.max()) if diffs.size else 0
    sentinel = max_diff + 1
    vals = np.where(diffs == 0, sentinel, diffs)
    uniq, first = np.unique(vals, return_index=True)
    keep = uniq != sentinel
    uniq, first = uniq[keep], first[keep]
    present = bytearray(max_diff + 2)
    for v in uniq:
        present[int(v)] = 1
    first_index = {int(v): int(i) for v, i in zip(uniq, first)}
    pbytes = bytes(present)
    uncovered = []
    for i in range(1, pair.n + 1):
        if i <= max_diff and pbytes[i]:
            continue
        if i > max_diff or 1 not in pbytes[i :: i]:
            uncovered.append(i)
    return VerificationReport(pair, uncovered, first_index, max_diff)


def _verify_python(pair, diffs):
    first_index = {}
    for idx, v in enumerate(diffs):
        if v != 0 and v not in first_index:
            first_index[v] = idx
    values = sorted(first_index)
    uncovered = []
    for i in range(1, pair.n + 1):
        if not any(v % i == 0 for v in values):
            uncovered.append(i)
    max_diff = values[-1] if values else 0
    return VerificationReport(pair, uncovered, first_index, max_diff)


def _necessity_check(pair):
    """The product of primes <= n divides the product of all differences, so
    max |s - t| must be at least roughly exp(n)^(1/(|S||T|)).  Sanity-checked
    with generous constant slack for n >= 64."""
    if pair.n < 64:
        return
    diffs = pair.differences()
    max_diff = int(diffs.max()) if isinstance(diffs, np.ndarray) else max(diffs)
    bits = max(max_diff.bit_length() - 1, 1)
    if pair.size * bits * math.log(2) < 0.7 * pair.n:
        raise ContractViolationError(
            "verified pair violates the magnitude lower bound: "
            f"max diff {max_diff} with {pair.size} pairs cannot cover n={pair.n}"
        )


# ---------------------------------------------------------------------------
# construction


def split_progression(progression, n, beta):
    """Split an AP A = {b + i*c} into (S, T) with S = {b + i*ceil(n^beta)*c},
    T = {i*c}, both over index range 0..ceil(n^beta), so that every element
    of A equals s - t.  Degenerate ceil(n^beta) == 1 gives S = A, T = {0}."""
    beta = Fraction(beta)
    m = ceil_pow(n, beta)
    if m == 1:
        return progression, ArithProgression(0, 1, 1)
    min_len = floor_pow(n, 2 * beta)
    if progression.length < min_len:
        raise ValueError(
            f"progression too short: length {progression.length} < n^(2*beta) = {min_len}"
        )
    if progression.length - 1 > m * m:
        raise ValueError(
            f"progression too long to cover: index {progression.length - 1} > {m * m}"
        )
    s = ArithProgression(progression.base, progression.step * m, m + 1)
    t = ArithProgression(0, progression.step, m + 1)
    return s, t


@functools.lru_cache(maxsize=512)
def trivial_pair(n):
    """The beta = 1/2 pair from splitting A = {1, ..., n}; verified, with
    trial-division factorizations."""
    if n < 1:
        raise ValueError("n must be positive")
    a = ArithProgression(1, 1, n)
    s, t = split_progression(a, n, Fraction(1, 2))
    pair = DivisorSetPair(
        GenArithProgression([s]),
        GenArithProgression([t]),
        n,
        alpha=Fraction(1, 2),
        beta=Fraction(1, 2),
        factor_provider="trial",
    )
    report = verify_divisor_property(pair)
    if not report.holds:
        raise ContractViolationError(
            f"trivial pair for n={n} failed verification: uncovered {report.uncovered[:5]}"
        )
    return pair


def combine_progressions(a1, a2):
    """Merge two APs into a 2-term GAP that keeps a multiple of x whenever
    either input had one.

    With a_k = {b_k + i*c_k : 1 <= i <= l_k}, the GAP is
    {c1*b2 + i*(c1*c2) + j*(c2*b1 - c1*b2) : 1 <= i <= max(l1, l2), j in {0, 1}}:
    its j=0 row is c1 * a2 and its j=1 row is c2 * a1.
    """
    b1, c1, l1 = a1.base - a1.step, a1.step, a1.length
    b2, c2, l2 = a2.base - a2.step, a2.step, a2.length
    length = max(l1, l2)
    delta = c2 * b1 - c1 * b2
    main_first = c1 * b2 + c1 * c2  # i = 1, j = 0
    if delta > 0:
        terms = [ArithProgression(main_first, c1 * c2, length), ArithProgression(0, delta, 2)]
    elif delta < 0:
        terms = [
            ArithProgression(main_first + delta, c1 * c2, length),
            ArithProgression(0, -delta, 2),
        ]
    else:
        terms = [ArithProgression(main_first, c1 * c2, length), ArithProgression(0, 1, 1)]
    return GenArithProgression(terms)


# ---------------------------------------------------------------------------
# the prime-case characterization


class PrimeCaseCertificate:
    """A factorization U = U_1 ... U_l of the product of primes <= n,
    together with candidate progression parameters b, c."""

    __slots__ = ("n", "parts", "b", "c")

    def __init__(self, n, parts, b, c):
        n = int(n)
        parts = tuple(int(u) for u in parts)
        if n < 2:
            raise ValueError("n must be at least 2")
        if any(u < 1 for u in parts):
            raise ValueError("parts must be positive")
        self.n = n
        self.parts = parts
        self.b = int(b)
        self.c = int(c)

    def __repr__(self):
        return f"PrimeCaseCertificate(n={self.n}, parts={self.parts}, b={self.b}, c={self.c})"


def prime_case_check(cert):
    """Check the congruence c * sum(i * V_i) + b == 0 (mod U) where
    V_i = (U/U_i) * inverse(U/U_i mod U_i).

    True implies (and is cross-checked against) every prime p | U_i
    dividing the i-th progression term b + i*c.
    """
    primes = primes_up_to(cert.n)
    u_total = math.prod(primes)
    prod = math.prod(cert.parts)
    if prod != u_total:
        raise ValueError(f"parts multiply to {prod}, expected {u_total}")
    for x, y in itertools.combinations(cert.parts, 2):
        if math.gcd(x, y) != 1:
            raise ValueError(f"parts {x} and {y} are not coprime")
    acc = 0
    for i, u_i in enumerate(cert.parts, start=1):
        if u_i == 1:
            continue
        cof = u_total // u_i
        t_i = pow(cof, -1, u_i)
        acc += i * cof * t_i
    ok = (cert.c * acc + cert.b) % u_total == 0
    if ok:
        for i, u_i in enumerate(cert.parts, start=1):
            term = cert.b + i * cert.c
            for p in primes:
                if u_i % p == 0 and term % p != 0:
                    raise ContractViolationError(
                        f"congruence held but {p} does not divide term {i}"
                    )
    return ok


# ---------------------------------------------------------------------------
# exhaustive search

_SEARCH_BUDGET = 10**8


def search_ap(n, max_b, max_c, max_len, primes_only=False):
    """All APs {b + i*c : 1 <= i <= l} with 0 <= b <= max_b, 1 <= c <= max_c,
    1 <= l <= max_len whose element set has a multiple of every target
    (targets = [1, n], or just the primes in [1, n] with primes_only).

    Exhaustive, deterministic lexicographic (b, c, l) order.  Raises
    ResourceBudgetError when the scan would exceed the step budget.
    """
    if n < 1 or max_b < 0 or max_c < 1 or max_len < 1:
        raise ValueError("bad search bounds")
    steps = (max_b + 1) * max_c * max_len
    if steps > _SEARCH_BUDGET:
        raise ResourceBudgetError(
            f"search space {steps} exceeds the {_SEARCH_BUDGET} step budget"
        )
    targets = primes_up_to(n) if primes_only else list(range(1, n + 1))
    found = []
    if not targets:
        targets = [1]
    for b in range(max_b + 1):
        for c in range(1, max_c + 1):
            remaining = set(targets)
            for ell in range(1, max_len + 1):
                if remaining:
                    e = b + ell * c
                    remaining = {t for t in remaining if e % t != 0}
                if not remaining:
                    found.append(ArithProgression(b + c, c, ell))
    return found


# ---------------------------------------------------------------------------
# JSON spec files


def pair_to_spec(pair, include_factorizations=False):
    doc = {
        "n": pair.n,
        "alpha": str(pair.alpha),
        "beta": str(pair.beta),
        "S": [
            {"base": t.base, "step": t.step, "length": t.length} for t in pair.s_set.terms
        ],
        "T": [
            {"base": t.base, "step": t.step, "length": t.length} for t in pair.t_set.terms
        ],
    }
    if pair._factor_provider == "trial":
        doc["prefactored"] = "trial"
    table = pair._factor_table
    if include_factorizations:
        table = {
            i: list(pair_factorization(pair, i))
            for i in range(pair.size)
            if pair.difference_at(i) != 0
        }
        doc["prefactored"] = "table"
    if table:
        doc["factorizations"] = {str(i): list(v) for i, v in sorted(table.items())}
    return doc


def save_pair_spec(pair, path, include_factorizations=False):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pair_to_spec(pair, include_factorizations), fh, indent=2, sort_keys=True)
        fh.write("\n")


def pair_from_spec(doc):
    def gap(items):
        return GenArithProgression(
            [ArithProgression(d["base"], d["step"], d["length"]) for d in items]
        )

    provider = None
    table = None
    if "factorizations" in doc:
        provider = "table"
        table = {int(i): tuple(v) for i, v in doc["factorizations"].items()}
    elif doc.get("prefactored") == "trial":
        provider = "trial"
    return DivisorSetPair(
        gap(doc["S"]),
        gap(doc["T"]),
        int(doc["n"]),
        Fraction(doc["alpha"]),
        Fraction(doc["beta"]),
        factor_provider=provider,
        factor_table=table,
    )


def load_pair_spec(path):
    """Load a pair from its JSON spec file; verification is the caller's move."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return pair_from_spec(doc)
