from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions
from periodlab.errors import ParseError
from periodlab.exact_algebra import (
    CyclotomicField,
    Poly,
    QuadraticNumber,
    RatFuncMatrix,
    RationalFunction,
    cyclotomic_polynomial,
    linear_dependency,
    parse_poly,
    poly_gcd,
    poly_roots_numeric,
    poly_xgcd,
    squarefree_part,
)
from periodlab.numerics import PrecisionCtx

small = fractions(-5, 5, 6)
polys = st.lists(small, min_size=1, max_size=5).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


@given(polys, nonzero_polys)
def test_division_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
def test_xgcd_bezout(a, b):
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g
    assert (a % g).is_zero() and (b % g).is_zero()


@given(nonzero_polys, nonzero_polys, nonzero_polys)
def test_gcd_of_products(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert ((a * c) % g).is_zero()
    assert (g % c.monic()).is_zero() or c.degree == 0


@given(polys, polys)
def test_derivative_product_rule(a, b):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(st.lists(fractions(-4, 4, 5), min_size=1, max_size=4, unique=True))
def test_rational_roots_recovered(roots):
    p = Poly.from_roots(roots)
    assert p.rational_roots() == sorted(roots)


@given(st.lists(fractions(-3, 3, 3), min_size=1, max_size=3, unique=True), st.integers(1, 3))
def test_squarefree_decomposition(roots, m):
    p = Poly.from_roots(roots) ** m
    dec = p.squarefree_decomposition()
    assert [k for _, k in dec] == [m]
    assert dec[0][0] == Poly.from_roots(roots).monic()


def test_parse_poly_forms():
    assert parse_poly("27t^3-16t") == Poly([0, -16, 0, 27])
    assert parse_poly("27/16*t^2") == Poly([0, 0, Fraction(27, 16)])
    assert parse_poly("(t+1)^2") == Poly([1, 2, 1])
    assert parse_poly("27*t^3 - 16*t").to_compact("t") == "27t^3-16t"
    with pytest.raises(ParseError):
        parse_poly("t^^2")


@given(polys)
def test_text_round_trip(p):
    assert parse_poly(p.to_text("t")) == p


def test_rational_function_normalization():
    t = Poly.t()
    f = RationalFunction(t * t - 1, t - 1)
    assert f == RationalFunction(t + 1)
    assert f.is_poly()


@given(nonzero_polys, nonzero_polys)
def test_rational_function_field_ops(a, b):
    f = RationalFunction(a, b)
    assert f * f.inverse() == RationalFunction(Poly([1]))
    assert (f + f) - f == f


def test_ratfunc_matrix_inverse():
    t = RationalFunction(Poly.t())
    M = RatFuncMatrix([[t, RationalFunction(Poly([1]))], [RationalFunction(Poly([0])), t]])
    assert M * M.inverse() == RatFuncMatrix.identity(2)


def test_linear_dependency_finds_first_relation():
    t = RationalFunction(Poly.t())
    one = RationalFunction(Poly([1]))
    vecs = [[one, t], [t, t * t], [one, one]]
    dep = linear_dependency(vecs)
    assert dep is not None and len(dep) == 2
    assert dep[0] * vecs[0][0] + dep[1] * vecs[1][0] == RationalFunction(Poly())


def test_numeric_roots_with_multiplicity():
    ctx = PrecisionCtx.from_digits(40)
    p = Poly.from_roots([1, 1, Fraction(-1, 3)])
    roots = poly_roots_numeric(p, ctx)
    assert len(roots) == 3
    with ctx.work():
        assert sum(1 for r in roots if abs(r - 1) < mpmath.mpf(10) ** -15) == 2


def test_squarefree_part():
    assert squarefree_part(12) == (2, 3)
    assert squarefree_part(-27) == (3, -3)


def test_quadratic_numbers():
    r = QuadraticNumber.sqrt(Fraction(-3, 4))
    assert r * r == QuadraticNumber(Fraction(-3, 4))
    x = QuadraticNumber(1, 2, 5)
    assert x * x.inverse() == QuadraticNumber(1)
    assert x.norm() == 1 - 4 * 5
    assert str(QuadraticNumber(Fraction(1, 2), Fraction(-11, 50), 5)) == "1/2 - 11/50*sqrt(5)"


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(3) == Poly([1, 1, 1])
    assert cyclotomic_polynomial(12) == Poly([1, 0, -1, 0, 1])


def test_cyclotomic_field_arithmetic():
    K = CyclotomicField(6)
    z = K.zeta()
    assert z**6 == K.one()
    assert z**3 == K(-1)
