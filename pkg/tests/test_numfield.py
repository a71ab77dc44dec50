import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import num

from hypsys.errors import FieldMismatch, InputError, NotIrreducible, NotTotallyReal
from hypsys.numfield import (
    QQ,
    compositum,
    cos_field,
    is_algebraic_integer,
    make_field,
    min_poly_of,
    sign_at,
    two_cos,
)

F = Fraction
K2 = make_field([1, 0, -2])
K5 = make_field([1, 0, -5])
# Q(cos 2pi/7): a cubic, so arithmetic exercises a nontrivial reduction table
K7, COS7 = cos_field(7)


def test_rational_field():
    k = make_field([1, 0])
    assert k.degree == 1 and k.is_rational
    assert list(k.embeddings) == [0]


def test_sqrt2_embeddings():
    k = make_field([1, 0, -2])
    assert k.degree == 2
    lo = k.root_value(0)
    hi = k.root_value(1)
    assert lo.within(-num(sympy.sqrt(2)), F(1, 10**30))
    assert hi.within(num(sympy.sqrt(2)), F(1, 10**30))
    # largest root is the default identity embedding
    assert k.identity_embedding == 1


def test_not_totally_real():
    with pytest.raises(NotTotallyReal):
        make_field([1, 0, 1])


def test_reducible_rejected():
    with pytest.raises(NotIrreducible):
        make_field([1, 0, -4])


def test_not_monic_rejected():
    with pytest.raises(InputError):
        make_field([2, 0, -1])


def test_cos_field_small():
    k, c = cos_field(3)
    assert k.is_rational and c == F(-1, 2)
    k, c = cos_field(4)
    assert k.is_rational and c == 0
    k, c = cos_field(6)
    assert k.is_rational and c == F(1, 2)


def test_cos_field_five():
    k, c = cos_field(5)
    assert list(k.min_poly) == [1, 1, -1]
    # 2cos(2pi/5) = 0.6180...
    assert (2 * c).embed().within(num(2 * sympy.cos(2 * sympy.pi / 5)), F(1, 10**30))


@pytest.mark.parametrize("p", [5, 7, 8, 9, 11, 12])
def test_cos_field_generator(p):
    k, c = cos_field(p)
    assert k.degree == sympy.totient(p) // 2
    assert c.embed().within(num(sympy.cos(2 * sympy.pi / p)), F(1, 10**40))
    assert is_algebraic_integer(2 * c)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6])
def test_two_cos_multiples(q):
    k, c = cos_field(7)
    y = two_cos(q, 7, k, 2 * c)
    assert y.embed().within(num(2 * sympy.cos(2 * q * sympy.pi / 7)), F(1, 10**40))


def test_basic_arithmetic(k2, sqrt2):
    assert sqrt2 * sqrt2 == 2
    assert (1 + sqrt2) + (1 - sqrt2) == 2
    # extended Euclid on x^2 - 2: (1 + a)(-1 + a) = a^2 - 1 = 1
    inv = 1 / (1 + sqrt2)
    assert inv == sqrt2 - 1
    assert inv * (1 + sqrt2) == 1


def test_division_by_zero(k2):
    with pytest.raises(ZeroDivisionError):
        k2.one / k2.zero


def test_field_mismatch(sqrt2):
    with pytest.raises(FieldMismatch):
        sqrt2 + K5.gen


def test_sign_at(sqrt2, k2):
    assert sign_at(sqrt2, 1) == 1
    assert sign_at(sqrt2, 0) == -1
    assert sign_at(k2.zero, 0) == 0 and sign_at(k2.zero, 1) == 0


def test_sign_tiny_nonzero(sqrt2):
    # (1 + sqrt2)^-40 is about 5e-16 and positive; its conjugate is huge and of sign +1 too
    x = (sqrt2 - 1) ** 40
    assert sign_at(x, 1) == 1
    assert sign_at(x - x, 1) == 0
    # a difference that is nonzero but smaller than 1e-30
    y = (sqrt2 - 1) ** 90
    assert sign_at(y, 1) == 1
    assert sign_at(-y, 1) == -1


def test_compositum_trivial_cases(k2):
    K, phi1, phi2 = compositum(QQ, k2)
    assert K == k2 and phi2(k2.gen) == k2.gen and phi1(QQ(3)) == 3
    K, phi1, phi2 = compositum(k2, k2)
    assert K == k2 and phi1(k2.gen) == K.gen


def test_compositum_sqrt2_sqrt5():
    K, phi1, phi2 = compositum(K2, K5)
    assert K.degree == 4
    s = phi1(K2.gen) + phi2(K5.gen)
    # frozen from sympy.minimal_polynomial(sqrt(2) + sqrt(5))
    assert min_poly_of(s) == [1, 0, -14, 0, 9]
    assert phi1(K2.gen) ** 2 == 2 and phi2(K5.gen) ** 2 == 5
    # identity embeddings compatible: images are the positive roots
    assert phi1(K2.gen).embed().within(num(sympy.sqrt(2)), F(1, 10**30))
    assert phi2(K5.gen).embed().within(num(sympy.sqrt(5)), F(1, 10**30))


def test_compositum_oracle_minpoly():
    x = sympy.Symbol("x")
    mp = sympy.Poly(sympy.minimal_polynomial(sympy.sqrt(2) + sympy.sqrt(5), x), x)
    assert [int(c) for c in mp.all_coeffs()] == [1, 0, -14, 0, 9]


def test_compositum_cos_fields():
    k5, c5 = cos_field(5)
    K, phi1, phi2 = compositum(K2, k5)
    assert K.degree == 4
    assert (phi2(c5).embed() - c5.embed()).within(0, F(1, 10**30))


def test_min_poly_of(k2, sqrt2):
    assert min_poly_of(k2(2)) == [1, -2]
    assert min_poly_of(sqrt2) == [1, 0, -2]
    assert min_poly_of(1 + sqrt2) == [1, -2, -1]


def test_is_algebraic_integer(k2, sqrt2):
    assert is_algebraic_integer(1 + sqrt2)
    assert not is_algebraic_integer(sqrt2 / 2)
    assert is_algebraic_integer(k2(7))
    assert not is_algebraic_integer(k2(F(1, 3)))


small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(k):
    return st.lists(small, min_size=k.degree, max_size=k.degree).map(k)


@given(elements(K7), elements(K7), elements(K7))
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == 1


@given(elements(K7), elements(K7))
def test_sign_multiplicative(a, b):
    for e in K7.embeddings:
        assert sign_at(a * b, e) == sign_at(a, e) * sign_at(b, e)


@given(elements(K7), elements(K7), elements(K7))
def test_evaluation_order(a, b, c):
    # the enclosure of (ab)c at each embedding contains the product of the separate enclosures
    for e in K7.embeddings:
        lhs = ((a * b) * c).embed(e)
        rhs = a.embed(e) * (b.embed(e) * c.embed(e))
        lo, hi = lhs.enclose_fractions(F(1, 10**31))
        assert hi - lo < F(1, 10**30)
        assert rhs.within(lhs, F(1, 10**30))


def test_compositum_homomorphism():
    K, phi1, phi2 = compositum(K2, K7)
    rng = random.Random(3)
    for _ in range(10):
        a = K2([F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)])
        b = K2([F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)])
        assert phi1(a * b) == phi1(a) * phi1(b)
        assert phi1(a + b) == phi1(a) + phi1(b)
        c = K7([F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)])
        d = K7([F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)])
        assert phi2(c * d) == phi2(c) * phi2(d)
        # numerical images agree with direct evaluation
        assert (phi2(c).embed() - c.embed()).within(0, F(1, 10**40))
        assert (phi1(a).embed() - a.embed()).within(0, F(1, 10**40))
