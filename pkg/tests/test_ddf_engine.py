import math
import random

import pytest

from oracles import (
    brute_ddf,
    naive_interval_poly,
    rand_monic_squarefree,
    rand_poly,
    smooth_instance,
)

import ddfkit.ddf_engine as engine
from ddfkit.divisor_sets import enumerate_index, trivial_pair
from ddfkit.errors import ContractViolationError, UncoveredFactorError
from ddfkit.ffield import FieldPoly, PrimeField, poly_gcd_monic
from ddfkit.frobenius import frobenius_power
from ddfkit.ddf_engine import (
    DistinctDegreeFactorization,
    RngStream,
    ddf_naive_oracle,
    ddf_smooth_randomized,
    ddf_smooth_small,
    factor_full,
    interval_polynomial,
    interval_polynomial_naive,
    preprocess_powers,
    random_subset_split,
    recursive_split,
    squarefree_decomposition,
)


# ---------------------------------------------------------------------------
# RngStream


def test_rng_determinism():
    a = RngStream(12345)
    b = RngStream(12345)
    assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]
    assert RngStream(1).next_u64() != RngStream(2).next_u64()
    # forks are independent of parent consumption
    p1 = RngStream(7)
    p1.next_u64()
    p2 = RngStream(7)
    assert p1.fork(3).next_u64() == p2.fork(3).next_u64()
    assert p1.fork(3).next_u64() != p1.fork(4).next_u64()


def test_rng_sampling():
    rng = RngStream(0)
    for n, m in ((10, 3), (100, 100), (5, 1)):
        got = rng.sample_indices(n, m)
        assert len(got) == m == len(set(got))
        assert all(0 <= i < n for i in got)
    counts = [0, 0, 0]
    for _ in range(3000):
        counts[rng.randbelow(3)] += 1
    assert all(800 < c < 1200 for c in counts)


# ---------------------------------------------------------------------------
# result container


def test_ddf_container_validation(f2, f5):
    good = DistinctDegreeFactorization(f2, {1: FieldPoly(f2, [0, 1, 1])})
    assert good.factors == {1: FieldPoly(f2, [0, 1, 1])}
    assert DistinctDegreeFactorization(f2, {1: FieldPoly.one(f2)}).factors == {}
    with pytest.raises(ValueError):
        DistinctDegreeFactorization(f2, {2: FieldPoly(f2, [1, 1])})  # degree not multiple
    with pytest.raises(ValueError):
        DistinctDegreeFactorization(f5, {1: FieldPoly(f5, [1, 2])})  # not monic
    assert good.product() == FieldPoly(f2, [0, 1, 1])


# ---------------------------------------------------------------------------
# preprocessing


def test_preprocess_powers(f2):
    pair = trivial_pair(9)
    h = FieldPoly(f2, [0, 1, 0, 0, 1])
    table = preprocess_powers(h, pair)
    for u in set(pair.s_enum) | set(pair.t_enum):
        assert table[u] == frobenius_power(h, u), u
    assert table[0] == FieldPoly.x(f2) % h
    assert table[2] == FieldPoly.x(f2)  # X^(q^2) = X mod X^4+X (all degrees divide 2)


def test_preprocess_requires_verified(f2):
    from ddfkit.divisor_sets import ArithProgression, DivisorSetPair, GenArithProgression
    from fractions import Fraction

    pair = DivisorSetPair(
        GenArithProgression([ArithProgression(1, 3, 4)]),
        GenArithProgression([ArithProgression(0, 1, 4)]),
        9,
        Fraction(1, 2),
        Fraction(1, 2),
    )
    h = FieldPoly(f2, [1, 1, 1])
    with pytest.raises(ValueError):
        preprocess_powers(h, pair)
    with pytest.raises(ValueError):
        preprocess_powers(FieldPoly(f2, [1] + [0] * 10 + [1]), trivial_pair(4))


def test_preprocess_multi_term_gap(f3):
    # a 2-term sumset exercises the cross-term composition path
    from fractions import Fraction

    from ddfkit.divisor_sets import ArithProgression, DivisorSetPair, GenArithProgression
    from ddfkit.divisor_sets import verify_divisor_property

    s = GenArithProgression([ArithProgression(1, 4, 3), ArithProgression(0, 1, 2)])
    t = GenArithProgression([ArithProgression(0, 1, 4)])
    pair = DivisorSetPair(s, t, 8, Fraction(9, 10), Fraction(7, 10))
    assert verify_divisor_property(pair).holds
    h = rand_monic_squarefree(f3, 6, random.Random(0))
    table = preprocess_powers(h, pair)
    for u in set(pair.s_enum) | set(pair.t_enum):
        assert table[u] == frobenius_power(h, u), u


# ---------------------------------------------------------------------------
# interval polynomials


def test_interval_single_index(f2):
    pair = trivial_pair(4)
    h = FieldPoly(f2, [0, 1, 0, 0, 1])
    table = preprocess_powers(h, pair)
    for i in range(pair.size):
        s, t = enumerate_index(pair, i)
        got = interval_polynomial(h, pair, table, i, i)
        if s == t:
            assert got == FieldPoly.one(f2)
        else:
            assert got == (frobenius_power(h, s) - frobenius_power(h, t)) % h


def test_interval_full_range_oracle(f2):
    pair = trivial_pair(4)
    h = FieldPoly(f2, [0, 1, 0, 0, 1])
    table = preprocess_powers(h, pair)
    got = interval_polynomial(h, pair, table, 0, pair.size - 1)
    assert got == naive_interval_poly(h, pair, 0, pair.size - 1)


def test_interval_random_and_split_merge():
    rnd = random.Random(7)
    for q, n in ((2, 9), (3, 16), (5, 25), (101, 36)):
        field = PrimeField(q)
        pair = trivial_pair(n)
        h = rand_monic_squarefree(field, rnd.randrange(2, n + 1), rnd)
        table = preprocess_powers(h, pair)
        for _ in range(5):
            lo = rnd.randrange(pair.size)
            hi = rnd.randrange(lo, pair.size)
            got = interval_polynomial(h, pair, table, lo, hi)
            assert got == naive_interval_poly(h, pair, lo, hi), (q, n, lo, hi)
            assert interval_polynomial_naive(h, pair, table, lo, hi) == got
            if lo < hi:
                mid = rnd.randrange(lo, hi)
                left = interval_polynomial(h, pair, table, lo, mid)
                right = interval_polynomial(h, pair, table, mid + 1, hi)
                assert (left * right) % h == got


def test_interval_bulk_path(f101):
    # large middle block forces the multipoint bulk path
    rnd = random.Random(8)
    pair = trivial_pair(400)
    h = rand_monic_squarefree(f101, 24, rnd)
    table = preprocess_powers(h, pair)
    lo, hi = 3, pair.size - 2
    assert interval_polynomial(h, pair, table, lo, hi) == interval_polynomial_naive(
        h, pair, table, lo, hi
    )


def test_interval_errors(f2):
    pair = trivial_pair(4)
    h = FieldPoly(f2, [0, 1, 0, 0, 1])
    table = preprocess_powers(h, pair)
    with pytest.raises(IndexError):
        interval_polynomial(h, pair, table, 0, pair.size)
    with pytest.raises(IndexError):
        interval_polynomial(h, pair, table, 3, 2)
    other = FieldPoly(f2, [1, 1, 0, 1])  # does not divide X^4+X
    with pytest.raises((KeyError, ValueError)):
        interval_polynomial(other, trivial_pair(9), table, 0, 1)


# ---------------------------------------------------------------------------
# recursive splitting


def test_recursive_split_examples(f2):
    f = FieldPoly(f2, [0, 1, 0, 0, 1])
    got = recursive_split(f, trivial_pair(4), RngStream(0))
    assert got.factors == {
        1: FieldPoly(f2, [0, 1, 1]),
        2: FieldPoly(f2, [1, 1, 1]),
    }
    irr = FieldPoly(f2, [1, 1, 0, 1])
    assert recursive_split(irr, trivial_pair(3), RngStream(0)).factors == {3: irr}
    lin = FieldPoly(f2, [1, 1])
    assert recursive_split(lin, trivial_pair(1), RngStream(0)).factors == {1: lin}


def test_recursive_split_validation(f2):
    with pytest.raises(ValueError):
        recursive_split(FieldPoly(f2, [1, 1]) * FieldPoly(f2, [1, 1]), trivial_pair(2), RngStream(0))
    with pytest.raises(ValueError):
        recursive_split(FieldPoly(f2, [1]), trivial_pair(2), RngStream(0))
    with pytest.raises(ValueError):
        # degree exceeds the pair's n
        recursive_split(FieldPoly(f2, [1, 1, 0, 1]), trivial_pair(2), RngStream(0))


def test_recursive_split_matches_oracle_with_invariants():
    rnd = random.Random(9)
    for q in (2, 3, 5, 101):
        field = PrimeField(q)
        for trial in range(12):
            deg = rnd.randrange(1, 65)
            f = rand_monic_squarefree(field, deg, rnd)
            got = recursive_split(f, trivial_pair(deg), RngStream(trial), check_invariants=True)
            want = ddf_naive_oracle(f)
            assert got == want, (q, trial, f)
            assert got.product() == f


def test_recursive_split_larger_pair():
    # a pair with n greater than deg f still covers everything
    field = PrimeField(5)
    rnd = random.Random(10)
    f = rand_monic_squarefree(field, 12, rnd)
    assert recursive_split(f, trivial_pair(30), RngStream(0)) == ddf_naive_oracle(f)


def test_degree_homogeneity_small(f2, f3, irr_tables):
    rnd = random.Random(11)
    for field, table in ((f2, irr_tables[2]), (f3, irr_tables[3])):
        for _ in range(10):
            deg = rnd.randrange(1, 6 * (3 if field.q == 2 else 1) + 1)
            deg = min(deg, 12 if field.q == 2 else 6)
            f = rand_monic_squarefree(field, max(deg, 1), rnd)
            got = recursive_split(f, trivial_pair(f.degree), RngStream(1))
            want = brute_ddf(f, table)
            assert got.factors == want


# ---------------------------------------------------------------------------
# smooth-degree routines


def test_ddf_smooth_small_examples(f2):
    f = FieldPoly(f2, [0, 1, 0, 0, 1])
    got = ddf_smooth_small(f, (2,))
    assert got.factors == {1: FieldPoly(f2, [0, 1, 1]), 2: FieldPoly(f2, [1, 1, 1])}
    quad = FieldPoly(f2, [1, 1, 1])
    assert ddf_smooth_small(quad, (2,)).factors == {2: quad}
    lin = FieldPoly(f2, [1, 1])
    assert ddf_smooth_small(lin, (3,)).factors == {1: lin}


def test_ddf_smooth_small_contract_violation(f2):
    # an irreducible of degree 3 cannot have degrees dividing 2
    irr3 = FieldPoly(f2, [1, 1, 0, 1])
    with pytest.raises(ContractViolationError):
        ddf_smooth_small(irr3, (2,))


def test_pigeonhole_counter_moves(f3):
    rnd = random.Random(12)
    before = engine.STATS["pigeonhole_checks"]
    w = smooth_instance(f3, [1, 2, 3, 6], rnd)
    got = ddf_smooth_small(w, (2, 3))
    assert got == ddf_naive_oracle(w)
    assert engine.STATS["pigeonhole_checks"] > before


def test_random_subset_split_properties(f2):
    rnd = random.Random(13)
    w = smooth_instance(f2, [1, 2, 4, 8, 16], rnd)
    d = w.degree
    logn = max(2, math.ceil(math.log2(d)))
    primes = tuple([2] * (4 * logn * logn + 3))
    r1 = random_subset_split(w, primes, RngStream(0x5EED))
    r2 = random_subset_split(w, primes, RngStream(0x5EED))
    assert r1 is not None and r1[0] == r2[0] and r1[1] == r2[1]
    w_sub, subset = r1
    assert (w % w_sub).is_zero()
    p = 0.5 ** (1.0 / logn)
    assert len(subset) == math.ceil(p * len(primes))
    with pytest.raises(ValueError):
        random_subset_split(w, (2, 2, 3), RngStream(0))
    # instance built so the subset certainly covers every factor degree
    full = random_subset_split(w, primes, RngStream(3))
    assert full is not None and full[0] == w.monic()


def test_ddf_smooth_randomized_matches_oracle():
    rnd = random.Random(14)
    for q in (2, 3, 5):
        field = PrimeField(q)
        for trial in range(6):
            degs = rnd.sample([1, 2, 3, 4, 6, 8, 12], rnd.randrange(2, 5))
            w = smooth_instance(field, degs, rnd)
            primes = []
            for d in degs:
                dd = d
                for p in (2, 3):
                    while dd % p == 0:
                        primes.append(p)
                        dd //= p
            want = ddf_naive_oracle(w)
            for seed in range(3):
                assert ddf_smooth_randomized(w, tuple(primes), RngStream(seed)) == want


def test_ddf_smooth_randomized_fallback(monkeypatch, f2):
    # retry exhaustion must fall back to the deterministic routine
    rnd = random.Random(15)
    w = smooth_instance(f2, [1, 2, 4, 8, 16], rnd)
    logn = max(2, math.ceil(math.log2(w.degree)))
    primes = tuple([2] * (4 * logn * logn + 5))
    monkeypatch.setattr(engine, "random_subset_split", lambda *a, **k: None)
    assert ddf_smooth_randomized(w, primes, RngStream(0)) == ddf_naive_oracle(w)


# ---------------------------------------------------------------------------
# naive oracle and the full pipeline


def test_naive_oracle_examples(f2):
    f = FieldPoly(f2, [0, 1, 0, 0, 1])
    assert ddf_naive_oracle(f).factors == {
        1: FieldPoly(f2, [0, 1, 1]),
        2: FieldPoly(f2, [1, 1, 1]),
    }
    irr = FieldPoly(f2, [1, 1, 0, 1])
    assert ddf_naive_oracle(irr).factors == {3: irr}
    assert ddf_naive_oracle(FieldPoly(f2, [0, 1, 1])).factors == {1: FieldPoly(f2, [0, 1, 1])}


def test_naive_oracle_exhaustive_small(f3, irr_tables):
    import itertools

    for tail in itertools.product(range(3), repeat=4):
        f = FieldPoly(f3, list(tail) + [1])
        d = f.derivative()
        if d.is_zero() or poly_gcd_monic(f, d).degree > 0:
            continue
        assert ddf_naive_oracle(f).factors == brute_ddf(f, irr_tables[3])


def test_squarefree_decomposition():
    rnd = random.Random(16)
    for q in (2, 3, 5):
        field = PrimeField(q)
        for _ in range(15):
            f = FieldPoly.one(field)
            seen = set()
            for _ in range(rnd.randrange(1, 4)):
                g = rand_monic_squarefree(field, rnd.randrange(1, 5), rnd)
                if g in seen:
                    continue
                seen.add(g)
                for _ in range(rnd.randrange(1, 4)):
                    f = f * g
            if f.degree < 1:
                continue
            parts = squarefree_decomposition(f)
            recon = FieldPoly.one(field)
            for mult, part in parts:
                assert part.is_monic()
                d = part.derivative()
                assert not d.is_zero() and poly_gcd_monic(part, d).degree == 0
                for _ in range(mult):
                    recon = recon * part
            assert recon == f.monic()
            # parts pairwise coprime
            for i, (_, a) in enumerate(parts):
                for _, b in parts[i + 1 :]:
                    assert poly_gcd_monic(a, b).degree == 0


def test_squarefree_decomposition_p_power(f2, f3):
    g = FieldPoly(f2, [1, 1, 0, 1])
    f = g * g  # multiplicity exactly p = 2
    assert squarefree_decomposition(f) == [(2, g)]
    g3 = FieldPoly(f3, [1, 1])
    f3_poly = g3 * g3 * g3
    assert squarefree_decomposition(f3_poly) == [(3, g3)]


def test_factor_full_examples(f2, f5):
    f = FieldPoly(f5, [1, 1]) * FieldPoly(f5, [1, 1]) * FieldPoly(f5, [2, 1])
    assert factor_full(f, RngStream(0)) == [
        (FieldPoly(f5, [1, 1]), 2),
        (FieldPoly(f5, [2, 1]), 1),
    ]
    irr = FieldPoly(f2, [1, 1, 0, 1])
    assert factor_full(irr, RngStream(0)) == [(irr, 1)]
    # X^6+X^5+X^3+X^2 factors as X^2 (X+1)^2 (X^2+X+1)
    f6 = FieldPoly(f2, [0, 0, 1, 1, 0, 1, 1])
    assert factor_full(f6, RngStream(0)) == [
        (FieldPoly(f2, [0, 1]), 2),
        (FieldPoly(f2, [1, 1]), 2),
        (FieldPoly(f2, [1, 1, 1]), 1),
    ]
    # and the product X^2 (X+1)(X^3+X+1) = X^6+X^5+X^4+X^2
    f7 = FieldPoly(f2, [0, 0, 1, 0, 1, 1, 1])
    assert factor_full(f7, RngStream(0)) == [
        (FieldPoly(f2, [0, 1]), 2),
        (FieldPoly(f2, [1, 1]), 1),
        (FieldPoly(f2, [1, 1, 0, 1]), 1),
    ]


def test_factor_full_random(irr_tables):
    from oracles import brute_factor

    rnd = random.Random(17)
    for q in (2, 3, 5):
        field = PrimeField(q)
        for trial in range(8):
            f = FieldPoly.one(field)
            for _ in range(rnd.randrange(1, 4)):
                g = rand_poly(field, rnd.randrange(1, 4), rnd, monic=True)
                f = f * g
            if f.degree < 1 or f.degree > 12:
                continue
            got = factor_full(f, RngStream(trial))
            want = brute_factor(f, irr_tables[q])
            assert dict(got) == want, (q, f)
            # identical across seeds (Las Vegas)
            assert factor_full(f, RngStream(trial + 1000)) == got


def test_uncovered_factor_reported(f2):
    # a pair valid only for n = 2 cannot cover a degree-3 factor; the
    # engine must report it rather than dropping it
    from fractions import Fraction

    from ddfkit.divisor_sets import ArithProgression, DivisorSetPair, GenArithProgression
    from ddfkit.divisor_sets import verify_divisor_property

    pair = DivisorSetPair(
        GenArithProgression([ArithProgression(1, 2, 2)]),
        GenArithProgression([ArithProgression(0, 1, 2)]),
        2,
        Fraction(1, 2),
        Fraction(9, 10),
    )
    assert verify_divisor_property(pair).holds  # covers 1 and 2 only
    irr3 = FieldPoly(f2, [1, 1, 0, 1])
    with pytest.raises((UncoveredFactorError, ValueError)):
        # degree 3 exceeds pair.n, so the guard fires first; bypass it by
        # a degree-2-compatible call on a poly with an uncovered factor
        recursive_split(irr3, pair, RngStream(0))
