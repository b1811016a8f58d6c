import random

import pytest

from oracles import brute_factor, rand_poly, rand_monic_squarefree

from ddfkit.ffield import FieldPoly, PrimeField, poly_gcd_monic
from ddfkit.frobenius import (
    FrobeniusTable,
    compose_powers,
    difference_gcd,
    frobenius_power,
)


def test_power_examples(f2, f3):
    h = FieldPoly(f3, [1, 0, 1])  # X^2 + 1, irreducible over F_3
    assert frobenius_power(h, 2) == FieldPoly.x(f3)
    assert frobenius_power(h, 0) == FieldPoly.x(f3) % h
    h2 = FieldPoly(f2, [1, 1, 1])
    assert frobenius_power(h2, 1) == FieldPoly(f2, [1, 1])


def test_power_matches_repeated_squaring():
    rnd = random.Random(0)
    for q in (2, 3, 5):
        field = PrimeField(q)
        for _ in range(15):
            h = rand_poly(field, rnd.randrange(1, 12), rnd, monic=True)
            if h.degree < 1:
                continue
            a = rnd.randrange(0, 5)
            want = FieldPoly.x(field) % h
            for _ in range(a):
                acc = FieldPoly.one(field)
                base = want
                e = q
                while e:
                    if e & 1:
                        acc = (acc * base) % h
                    base = (base * base) % h
                    e >>= 1
                want = acc
            assert frobenius_power(h, a) == want


def test_power_successor_property():
    # raising X^(q^a) to the q-th power (composition with X^q) gives a+1
    rnd = random.Random(1)
    for q in (2, 5):
        field = PrimeField(q)
        for _ in range(10):
            h = rand_poly(field, rnd.randrange(2, 10), rnd, monic=True)
            a = rnd.randrange(0, 21)
            step = frobenius_power(h, 1)
            cur = frobenius_power(h, a)
            assert compose_powers(step, cur, h) == frobenius_power(h, a + 1)


def test_power_order_divides_degree(irr_tables):
    # X^(q^d) == X mod h for every irreducible h of degree d <= 6
    for q, table in irr_tables.items():
        field = PrimeField(q)
        x = FieldPoly.x(field)
        for deg, polys in table.items():
            for h in polys:
                if h.degree == 1:
                    continue
                assert frobenius_power(h, deg) == x % h, (q, h)


def test_arbitrary_precision_exponent(f2):
    h = FieldPoly(f2, [1, 1, 1])  # irreducible degree 2
    giant = 10**30  # even, so X^(q^giant) == X
    assert frobenius_power(h, giant) == FieldPoly.x(f2) % h
    assert frobenius_power(h, giant + 1) == frobenius_power(h, 1)


def test_compose_examples(f3):
    h = FieldPoly(f3, [1, 0, 1])
    fa = frobenius_power(h, 1)
    assert compose_powers(fa, FieldPoly.x(f3) % h, h) == fa
    assert compose_powers(fa, fa, h) == frobenius_power(h, 2)


def test_compose_symmetry():
    rnd = random.Random(2)
    field = PrimeField(5)
    for _ in range(10):
        h = rand_monic_squarefree(field, rnd.randrange(2, 9), rnd)
        s, t = rnd.randrange(0, 6), rnd.randrange(0, 6)
        fs, ft = frobenius_power(h, s), frobenius_power(h, t)
        assert compose_powers(fs, ft, h) == compose_powers(ft, fs, h)
        assert compose_powers(fs, ft, h) == frobenius_power(h, s + t)


def test_difference_gcd_examples(f2):
    h = FieldPoly(f2, [0, 1, 0, 0, 1])  # X^4 + X = X(X+1)(X^2+X+1)
    assert difference_gcd(h, 3, 1) == h
    assert difference_gcd(h, 2, 1) == FieldPoly(f2, [0, 1, 1])
    assert difference_gcd(h, 5, 5) == h


def test_difference_gcd_properties(irr_tables):
    rnd = random.Random(3)
    for q in (2, 3, 5):
        field = PrimeField(q)
        table = irr_tables[q]
        for _ in range(12):
            # random squarefree product of distinct irreducibles
            parts = []
            for deg in rnd.sample(list(table), rnd.randrange(1, 4)):
                p = rnd.choice(table[deg])
                if p not in parts:
                    parts.append(p)
            h = FieldPoly.one(field)
            for p in parts:
                h = h * p
            if h.degree < 1:
                continue
            s, t = rnd.randrange(0, 8), rnd.randrange(0, 8)
            got = difference_gcd(h, s, t)
            assert got == difference_gcd(h, t, s)
            assert (h % got).is_zero()
            # equals the product of factors whose degree divides |s - t|
            want = FieldPoly.one(field)
            for p in parts:
                if s == t or abs(s - t) % p.degree == 0:
                    want = want * p
            assert got == want
            # output squarefree
            fac = brute_factor(got, table) if got.degree > 0 else {}
            assert all(e == 1 for e in fac.values())


def test_table():
    field = PrimeField(2)
    h = FieldPoly(field, [0, 1, 0, 0, 1])
    tab = FrobeniusTable(h, {0: FieldPoly.x(field), 2: frobenius_power(h, 2)})
    assert 0 in tab and 2 in tab and 1 not in tab
    assert len(tab) == 2 and tab.exponents() == [0, 2]
    with pytest.raises(KeyError):
        tab[7]
