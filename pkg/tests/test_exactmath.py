"""Exact arithmetic layer: scalars, polynomials, factorization, places.

Expected values below were computed by hand (discriminant formulas,
long division) before the implementation existed, and are frozen.
"""

import random
from fractions import Fraction as F

import pytest

from cleanpair.exactmath import (
    QQ,
    DegreeError,
    Place,
    PolyRing,
    PoleAtPlace,
    QuadExtElem,
    QuadExtField,
    RatFunc,
    RatFuncField,
    UndefinedValuation,
    UniPoly,
    divisor_of,
    factor_rational_poly,
    is_irreducible,
    parse_rational,
    poly_discriminant,
    poly_discriminant_cubic,
    poly_gcd,
    quotient_field_image,
    rational_roots,
    rational_to_str,
    resultant,
    sqrt_rational,
    squarefree_decomposition,
    squarefree_part,
    stays_irreducible_over_quadratic,
    valuation_at,
    valuation_or_inf,
)

T = UniPoly.gen("T")
X = UniPoly.gen("x")


def rand_poly(rng, var="T", deg=4, field=QQ):
    coeffs = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(deg + 1)]
    return UniPoly(var, coeffs, field)


# -- scalars ------------------------------------------------------------------


def test_rational_string_round_trip():
    assert rational_to_str(F(-3, 7)) == "-3/7"
    assert rational_to_str(F(5)) == "5/1"  # canonical form always carries a denominator
    assert parse_rational("-3/7") == F(-3, 7)
    assert parse_rational("14") == F(14)
    assert parse_rational(rational_to_str(F(22, 7))) == F(22, 7)
    with pytest.raises(ValueError):
        parse_rational("3.5x")


def test_sqrt_rational():
    assert sqrt_rational(F(196, 1681)) == F(14, 41)
    assert sqrt_rational(F(2)) is None
    assert sqrt_rational(F(0)) == 0
    assert sqrt_rational(F(-4)) is None


def test_squarefree_part():
    assert squarefree_part(F(8)) == 2
    assert squarefree_part(F(9, 4)) == 1
    assert squarefree_part(F(-12)) == -3
    assert squarefree_part(F(50, 27)) == 6


def test_quadext_arithmetic():
    e = QuadExtElem(1, 2, 3)
    assert e * e == QuadExtElem(13, 4, 3)
    assert e.norm() == -11
    assert (e / e) == 1
    assert e + e.conjugate() == 2
    inv = 1 / e
    assert e * inv == 1
    # perfect-square radicands fold to plain rationals
    assert QuadExtElem(1, 3, 4) == 7
    assert QuadExtElem(1, 3, 4).is_rational
    with pytest.raises(ValueError):
        QuadExtElem(0, 1, 2) + QuadExtElem(0, 1, 3)


def test_quadext_field_sqrt():
    K = QuadExtField(5)
    r = K.sqrt(QuadExtElem(9, 4, 5))
    assert r is not None and r * r == QuadExtElem(9, 4, 5)
    assert K.sqrt(K.coerce(5)) == K.sqrt_gen()
    assert K.sqrt(K.coerce(7)) is None


# -- polynomials --------------------------------------------------------------


def test_poly_ring_axioms():
    rng = random.Random(20260814)
    for _ in range(40):
        a, b, c = (rand_poly(rng, deg=rng.randint(0, 5)) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == UniPoly.zero("T")


def test_poly_divmod_identity():
    rng = random.Random(7)
    for _ in range(40):
        a = rand_poly(rng, deg=rng.randint(0, 7))
        b = rand_poly(rng, deg=rng.randint(0, 4))
        if not b:
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree() < b.degree()


def test_derivative_product_rule():
    rng = random.Random(11)
    for _ in range(25):
        a = rand_poly(rng, deg=3)
        b = rand_poly(rng, deg=4)
        assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


def test_discriminants():
    assert poly_discriminant(UniPoly("x", [0, 1, 0, 1])) == -4  # x^3 + x
    assert poly_discriminant_cubic(UniPoly("x", [-1, 0, 0, 1])) == -27  # x^3 - 1
    # x^3 - 3x + 11, by -4a^3 - 27b^2
    assert poly_discriminant_cubic(UniPoly("x", [11, -3, 0, 1])) == -3159
    # quadratic b^2 - 4ac
    assert poly_discriminant(UniPoly("x", [3, 5, 2])) == 1
    with pytest.raises(DegreeError):
        poly_discriminant_cubic(X * X)


def test_resultant_multiplicative_in_roots():
    # Res(x - a, g) = g(a)
    g = X**3 - 2 * X + 5
    assert resultant(X - 2, g) == g.evaluate(F(2))
    # shared factor kills the resultant
    assert resultant((X - 1) * (X + 3), (X - 1) * (X + 4)) == 0
    rng = random.Random(13)
    for _ in range(15):
        a = rand_poly(rng, var="x", deg=rng.randint(1, 3))
        b = rand_poly(rng, var="x", deg=rng.randint(1, 3))
        c = rand_poly(rng, var="x", deg=rng.randint(1, 2))
        if not (a and b and c):
            continue
        assert resultant(a * b, c) == resultant(a, c) * resultant(b, c)


def test_gcd_and_squarefree():
    a = (T**2 - 1) * (T**3 + 2)
    b = (T - 1) * (T**3 + 2)
    assert poly_gcd(a, b) == ((T - 1) * (T**3 + 2)).monic()
    p = (T - 1) ** 2 * (T + 2) ** 3 * (T**2 + 1) * 6
    const, parts = squarefree_decomposition(p)
    rebuilt = UniPoly.constant("T", const)
    for g, m in parts:
        rebuilt = rebuilt * g**m
    assert rebuilt == p
    assert sorted(m for _, m in parts) == [1, 2, 3]


def test_compose_and_reverse():
    p = X**2 + 1
    assert p.compose(X - 3) == X**2 - 6 * X + 10
    assert (T**2 + 2 * T + 3).reversed_coeffs() == 3 * T**2 + 2 * T + 1


# -- factorization ------------------------------------------------------------


def test_factor_rational_poly():
    c, parts = factor_rational_poly(T**4 - 1)
    assert c == 1
    assert [(str(q), m) for q, m in parts] == [
        ("T - 1", 1),
        ("T + 1", 1),
        ("T^2 + 1", 1),
    ]
    c, parts = factor_rational_poly(F(3, 2) * (T + 2) ** 2 * (2 * T - 1))
    assert c == 3
    assert parts == [(T - F(1, 2), 1), (T + 2, 2)]


def test_factor_random_recombination():
    rng = random.Random(101)
    for _ in range(20):
        p = rand_poly(rng, deg=rng.randint(1, 6))
        if not p:
            continue
        c, parts = factor_rational_poly(p)
        rebuilt = UniPoly.constant("T", c)
        for q, m in parts:
            assert q.is_monic() and is_irreducible(q)
            rebuilt = rebuilt * q**m
        assert rebuilt == p


def test_rational_roots():
    assert rational_roots((2 * T - 1) ** 2 * (T + 3) * (T**2 + 1)) == [
        (F(-3), 1),
        (F(1, 2), 2),
    ]


def test_quadratic_extension_splitting():
    assert stays_irreducible_over_quadratic(T**3 - 2, 5)
    # T^2 - 5 splits over Q(sqrt(5)) but not over Q(sqrt(2))
    assert not stays_irreducible_over_quadratic(T**2 - 5, 5)
    assert stays_irreducible_over_quadratic(T**2 - 5, 2)
    assert not stays_irreducible_over_quadratic(T**2 - 20, 5)


# -- rational functions -------------------------------------------------------


def test_ratfunc_normalization():
    f = RatFunc((T**2 - 1) * 2, (T - 1) * 4)
    assert f.num == F(1, 2) * T + F(1, 2)
    assert f.den == UniPoly.constant("T", F(1))
    assert f.is_polynomial()
    g = RatFunc(T + 1, 2 * T - 3)
    assert g.den.is_monic()
    assert g.evaluate(F(2)) == 3
    assert g.degree_map() == 1


def test_ratfunc_field_ops():
    rng = random.Random(23)
    for _ in range(20):
        a = RatFunc(rand_poly(rng, deg=2), rand_poly(rng, deg=2) + T**3)
        b = RatFunc(rand_poly(rng, deg=3), T**2 + 1)
        assert (a + b) - b == a
        if b:
            assert (a * b) / b == a
    f = RatFunc(T**2 + 1, T - 2)
    finv = f.substitute_inverse("U")
    U = UniPoly.gen("U")
    assert finv == RatFunc(U**2 + 1, U - 2 * U**2)


def test_tower_coefficients():
    Fs = RatFuncField("S")
    TT = UniPoly.gen("T", Fs)
    S = Fs.gen()
    q = (TT + S) * (TT - S)
    assert q == TT**2 - S * S
    assert q.evaluate(S) == 0
    ring = PolyRing("x1")
    x2 = UniPoly.gen("x2", ring)
    x1 = UniPoly.gen("x1")
    nested = x2**2 - x1
    assert nested.coeff(0) == -x1
    assert nested.evaluate(ring.coerce(x1)) == x1 * x1 - x1


# -- places and valuations ----------------------------------------------------


def test_valuations_frozen_example():
    # -3888 T^4 (T + 9/4) has divisor 4(T) + (T + 9/4) - 5(infinity)
    d = RatFunc(UniPoly("T", [0, 0, 0, 0, -3888]) * UniPoly("T", [9, 4]))
    assert valuation_at(Place.linear("T", 0), d) == 4
    assert valuation_at(Place.linear("T", F(-9, 4)), d) == 1
    assert valuation_at(Place.infinity("T"), d) == -5
    dv = divisor_of(d)
    assert [(str(pl), m) for pl, m in dv] == [
        ("(T)", 4),
        ("(T + 9/4)", 1),
        ("infinity", -5),
    ]


def test_divisor_degree_zero():
    rng = random.Random(31)
    for _ in range(15):
        num = rand_poly(rng, deg=rng.randint(1, 4))
        den = rand_poly(rng, deg=rng.randint(1, 3))
        if not num or not den:
            continue
        f = RatFunc(num, den)
        if not f or f.degree_map() == 0:
            continue
        assert sum(pl.degree() * m for pl, m in divisor_of(f)) == 0


def test_valuation_additive():
    rng = random.Random(41)
    places = [Place.linear("T", 1), Place.infinity("T"), Place.finite(T**2 + 1)]
    for _ in range(15):
        a = RatFunc(rand_poly(rng, deg=3), rand_poly(rng, deg=2) + T**4)
        b = RatFunc(rand_poly(rng, deg=2), T - 1)
        if not a or not b:
            continue
        for pl in places:
            assert valuation_at(pl, a * b) == valuation_at(pl, a) + valuation_at(pl, b)
            assert valuation_at(pl, a / b) == valuation_at(pl, a) - valuation_at(pl, b)


def test_valuation_errors_and_inf():
    with pytest.raises(UndefinedValuation):
        valuation_at(Place.linear("T", 0), RatFunc(UniPoly.zero("T")))
    assert valuation_or_inf(Place.linear("T", 0), 0) == float("inf")
    assert valuation_at(Place.linear("T", 0), F(7, 2)) == 0
    with pytest.raises(ValueError):
        Place.finite(T**2 - 1)  # reducible
    with pytest.raises(ValueError):
        Place.finite(2 * T - 1)  # not monic


def test_quadext_coefficient_valuations():
    K = QuadExtField(2)
    root2 = K.sqrt_gen()
    TK = UniPoly.gen("T", K)
    f = RatFunc(TK * TK * root2 + TK * 3)  # sqrt(2) T^2 + 3T
    assert valuation_at(Place.linear("T", 0), f) == 1
    assert valuation_at(Place.infinity("T"), f) == -2
    assert valuation_at(Place.finite(T**3 - 2), f) == 0
    g = RatFunc(TK + root2)
    assert valuation_at(Place.infinity("T"), g) == -1


def test_quotient_field_image():
    f = RatFunc(T**2 + 1, T + 2)
    assert quotient_field_image(Place.linear("T", 1), f) == F(2, 3)
    with pytest.raises(PoleAtPlace):
        quotient_field_image(Place.infinity("T"), f)
    with pytest.raises(PoleAtPlace):
        quotient_field_image(Place.linear("T", -2), f)
    with pytest.raises(PoleAtPlace):
        quotient_field_image(Place.infinity("T"), RatFunc(T**2 + 1, T))
    g = RatFunc(T, T + 1)
    assert quotient_field_image(Place.infinity("T"), g) == 1
    # higher-degree place: residue is a polynomial representative
    res = quotient_field_image(Place.finite(T**2 + 1), RatFunc(T**3, T + 1))
    assert isinstance(res, UniPoly)
    # T^3 = T*(T^2+1) - T == -T;  1/(T+1) == (1-T)/2  mod T^2+1
    assert res == (-T) * (1 - T) * F(1, 2) % (T**2 + 1)
