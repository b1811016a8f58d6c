import random

import pytest

from oracles import horner_compose, rand_poly, school_mul

from ddfkit.ffield import (
    FieldPoly,
    PrimeField,
    QuotientRingPoly,
    format_poly_text,
    modcomp,
    multipoint_eval_quotient,
    parse_poly_text,
    poly_divrem,
    poly_gcd_monic,
    poly_mul,
)

FIELDS = [2, 3, 5, 101]


def test_field_construction():
    assert PrimeField(2).q == 2
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(1)
    with pytest.raises(ValueError):
        PrimeField(2**62 + 9)  # beyond the machine-word bound
    assert PrimeField(101) == PrimeField(101)


def test_canonical_form(f5):
    assert FieldPoly(f5, [1, 2, 0, 0]).coeffs == (1, 2)
    assert FieldPoly(f5, [0, 0]).is_zero()
    assert FieldPoly(f5, [6, 5]).coeffs == (1,)
    # renormalization is idempotent
    p = FieldPoly(f5, [3, 0, 4, 0])
    assert FieldPoly(f5, p.coeffs) == p


def test_mul_examples(f2):
    x1 = FieldPoly(f2, [1, 1])
    assert poly_mul(x1, x1) == FieldPoly(f2, [1, 0, 1])
    a = FieldPoly(f2, [1, 1, 0, 1])
    assert poly_mul(a, FieldPoly.one(f2)) == a
    assert poly_mul(a, FieldPoly.zero(f2)).is_zero()


def test_mul_matches_schoolbook():
    rnd = random.Random(0)
    for q in FIELDS:
        field = PrimeField(q)
        for _ in range(40):
            a = rand_poly(field, rnd.randrange(0, 50), rnd)
            b = rand_poly(field, rnd.randrange(0, 50), rnd)
            assert poly_mul(a, b) == school_mul(a, b)
    # large sizes hit the packed path
    field = PrimeField(101)
    a = rand_poly(field, 700, rnd)
    b = rand_poly(field, 450, rnd)
    assert poly_mul(a, b) == school_mul(a, b)


def test_mul_big_prime():
    field = PrimeField(4611686018427387847)  # prime below 2^62
    rnd = random.Random(5)
    for _ in range(10):
        a = rand_poly(field, rnd.randrange(0, 24), rnd)
        b = rand_poly(field, rnd.randrange(0, 24), rnd)
        assert poly_mul(a, b) == school_mul(a, b)


def test_ring_axioms():
    rnd = random.Random(1)
    for q in FIELDS:
        field = PrimeField(q)
        for _ in range(1000):
            a = rand_poly(field, rnd.randrange(0, 10), rnd)
            b = rand_poly(field, rnd.randrange(0, 10), rnd)
            c = rand_poly(field, rnd.randrange(0, 10), rnd)
            assert a * (b + c) == a * b + a * c
            assert (a * b) * c == a * (b * c)


def test_divrem_examples(f2):
    a = FieldPoly(f2, [0, 1, 0, 0, 1])  # X^4 + X
    b = FieldPoly(f2, [0, 1, 1])  # X^2 + X
    assert poly_divrem(a, b) == (FieldPoly(f2, [1, 1, 1]), FieldPoly.zero(f2))
    monic = FieldPoly(f2, [1, 0, 1])
    assert poly_divrem(monic, monic) == (FieldPoly.one(f2), FieldPoly.zero(f2))
    small = FieldPoly(f2, [1, 1])
    assert poly_divrem(small, monic) == (FieldPoly.zero(f2), small)
    with pytest.raises(ZeroDivisionError):
        poly_divrem(a, FieldPoly.zero(f2))


def test_divrem_roundtrip():
    rnd = random.Random(2)
    for q in FIELDS:
        field = PrimeField(q)
        for _ in range(120):
            a = rand_poly(field, rnd.randrange(0, 80), rnd)
            b = rand_poly(field, rnd.randrange(0, 40), rnd)
            if b.is_zero():
                continue
            quo, rem = poly_divrem(a, b)
            assert quo * b + rem == a
            assert rem.degree < b.degree


def test_gcd_examples(f2):
    assert poly_gcd_monic(FieldPoly(f2, [0, 1, 1]), FieldPoly(f2, [1, 0, 1])) == FieldPoly(
        f2, [1, 1]
    )
    a = FieldPoly(f2, [1, 0, 1, 1])
    assert poly_gcd_monic(a, FieldPoly.zero(f2)) == a.monic()
    assert poly_gcd_monic(a, FieldPoly.one(f2)) == FieldPoly.one(f2)
    with pytest.raises(ValueError):
        poly_gcd_monic(FieldPoly.zero(f2), FieldPoly.zero(f2))


def test_gcd_properties():
    rnd = random.Random(3)
    for q in FIELDS:
        field = PrimeField(q)
        for _ in range(60):
            g = rand_poly(field, rnd.randrange(0, 6), rnd, monic=True)
            u = rand_poly(field, rnd.randrange(0, 8), rnd, monic=True)
            v = rand_poly(field, rnd.randrange(0, 8), rnd, monic=True)
            a, b = g * u, g * v
            got = poly_gcd_monic(a, b)
            assert (a % got).is_zero() and (b % got).is_zero()
            assert (got % g).is_zero()  # any common divisor divides the gcd


def test_modcomp_examples(f5):
    f = FieldPoly(f5, [0, 0, 1])
    g = FieldPoly(f5, [1, 1])
    h = FieldPoly(f5, [0, 0, 0, 1])
    assert modcomp(f, g, h) == FieldPoly(f5, [1, 2, 1])
    x = FieldPoly.x(f5)
    any_f = FieldPoly(f5, [3, 1, 4, 1])
    assert modcomp(any_f, x, h) == any_f % h
    assert modcomp(x, g, h) == g % h
    with pytest.raises(ValueError):
        modcomp(f, g, FieldPoly(f5, [2, 2]))  # not monic
    with pytest.raises(ValueError):
        modcomp(f, g, FieldPoly(f5, [1]))  # constant


def test_modcomp_matches_horner():
    rnd = random.Random(4)
    for q in FIELDS:
        field = PrimeField(q)
        for _ in range(20):
            f = rand_poly(field, rnd.randrange(0, 256), rnd)
            g = rand_poly(field, rnd.randrange(0, 64), rnd)
            h = rand_poly(field, rnd.randrange(1, 64), rnd, monic=True)
            if h.degree < 1:
                continue
            assert modcomp(f, g, h) == horner_compose(f, g, h)


def test_quotient_ring_poly(f5):
    h = FieldPoly(f5, [1, 0, 1, 1])
    big = FieldPoly(f5, [0, 0, 0, 0, 1])
    p = QuotientRingPoly(h, [big, FieldPoly.one(f5)])
    assert all(c.degree < h.degree for c in p.coeffs)
    with pytest.raises(ValueError):
        QuotientRingPoly(FieldPoly(f5, [2]), [big])


def test_multipoint_examples(f2):
    h = FieldPoly(f2, [0, 1, 0, 0, 1])  # X^4 + X
    # p(Z) = Z - t for a constant t: evaluation at s gives s - t
    t = FieldPoly(f2, [1, 1])
    p = QuotientRingPoly(h, [-t, FieldPoly.one(f2)])
    s = FieldPoly(f2, [0, 0, 1])
    assert multipoint_eval_quotient(p, [s]) == [(s - t) % h]
    assert multipoint_eval_quotient(p, []) == []


def test_multipoint_vs_horner():
    rnd = random.Random(5)
    for q in FIELDS:
        field = PrimeField(q)
        for npts in (1, 5, 9, 17, 40, 100):
            h = rand_poly(field, rnd.randrange(1, 10), rnd, monic=True)
            if h.degree < 1:
                continue
            coeffs = [rand_poly(field, rnd.randrange(0, h.degree), rnd) for _ in range(rnd.randrange(1, 25))]
            p = QuotientRingPoly(h, coeffs)
            pts = [rand_poly(field, rnd.randrange(0, h.degree), rnd) for _ in range(npts)]
            assert multipoint_eval_quotient(p, pts) == [p.evaluate(x) for x in pts]


def test_multipoint_frobenius_product(f2, irr_tables):
    # p(Z) = prod(Z - X^(q^s)) evaluated at Frobenius powers agrees with
    # the direct nested-loop products
    from ddfkit.frobenius import frobenius_power

    h = FieldPoly(f2, [0, 1, 0, 0, 1])
    powers = [frobenius_power(h, s) for s in range(4)]
    p = QuotientRingPoly(h, [FieldPoly.one(f2)])
    coeffs = [FieldPoly.one(f2)]
    for t in powers[:3]:
        new = [FieldPoly.zero(f2)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - (c * t) % h
        coeffs = new
    p = QuotientRingPoly(h, coeffs)
    got = multipoint_eval_quotient(p, powers)
    for x, v in zip(powers, got):
        direct = FieldPoly.one(f2)
        for t in powers[:3]:
            direct = (direct * (x - t)) % h
        assert v == direct


def test_text_format(f5):
    p = FieldPoly(f5, [1, 2, 3])
    assert format_poly_text(p) == "q=5; 1,2,3"
    assert parse_poly_text("q=5; 1,2,3") == p
    assert parse_poly_text(" q=5;  ").is_zero()
    assert format_poly_text(FieldPoly.zero(f5)) == "q=5;"
    for bad in ("q=5; 1,0", "q=5; 5", "q=5; -1", "q=4; 1", "1,2,3", "q=x; 1"):
        with pytest.raises(ValueError):
            parse_poly_text(bad)


def test_field_mismatch(f2, f5):
    with pytest.raises(ValueError):
        poly_mul(FieldPoly.one(f2), FieldPoly.one(f5))
