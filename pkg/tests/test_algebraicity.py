from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions
from periodlab.algebraicity import (
    algebraicity_report,
    gamma_quotient_test,
    gamma_third_constant,
    in_cyclotomic3,
    integer_relation,
    minimal_polynomial,
    precision_gate,
    sim_test,
)
from periodlab.errors import PrecisionTooLow
from periodlab.exact_algebra import Poly
from periodlab.numerics import PrecisionCtx, gamma, to_mp

CTX = PrecisionCtx.from_digits(60)


def _at(c, f):
    with c.work():
        return f()


def test_sqrt2_plus_sqrt3():
    cand = minimal_polynomial(lambda c: _at(c, lambda: mpmath.sqrt(2) + mpmath.sqrt(3)), 4, 100, CTX)
    assert cand.to_text() == "x^4-10x^2+1"
    assert cand.dual_certified


@given(
    fractions(-5, 5, 7),
    fractions(Fraction(1, 7), 5, 7),
    st.sampled_from([2, 3, 5, 6, 7, 10]),
)
def test_quadratic_minimal_polynomials(a, b, d):
    # (x - a)^2 - b^2 d, made primitive
    expect = Poly([a * a - b * b * d, -2 * a, 1]).primitive()
    x = lambda c: _at(c, lambda: to_mp(a) + to_mp(b) * mpmath.sqrt(d))
    cand = minimal_polynomial(x, 2, 10**5, CTX)
    assert cand is not None and cand.poly == expect


@given(fractions(-50, 50, 50))
def test_rationals_have_degree_one(q):
    cand = minimal_polynomial(lambda c: _at(c, lambda: to_mp(q)), 3, 1000, CTX)
    assert cand.degree == 1
    assert cand.poly == Poly([-q, 1]).primitive()


def test_complex_roots_of_unity():
    z3 = lambda c: _at(c, lambda: mpmath.expjpi(mpmath.mpf(2) / 3))
    assert minimal_polynomial(z3, 4, 100, CTX).to_text() == "x^2+x+1"
    z12 = lambda c: _at(c, lambda: mpmath.expjpi(mpmath.mpf(1) / 6))
    assert minimal_polynomial(z12, 8, 100, CTX).to_text() == "x^4-x^2+1"


def test_pi_has_no_small_polynomial():
    rep = algebraicity_report(lambda c: _at(c, lambda: +mpmath.pi), 4, 1000, CTX)
    assert rep.verdict == "no-relation-at-bounds"


def test_integer_relation_of_logs():
    vals = lambda c: _at(c, lambda: [mpmath.log(2), mpmath.log(3), mpmath.log(6)])
    rel = integer_relation(vals, 100, CTX)
    assert rel.coefficients == (-1, -1, 1)
    assert rel.dual_certified


def test_precision_gate():
    assert precision_gate(0, 10**6, 3) == 240
    with pytest.raises(PrecisionTooLow):
        integer_relation([1, mpmath.sqrt(2)], 10**40, PrecisionCtx.from_digits(20))


def test_relation_refuted_at_double_precision():
    # a perturbation below the search tolerance but above the doubled check
    ctx = PrecisionCtx(200)

    def x(c):
        with c.work():
            return mpmath.sqrt(2) + mpmath.mpf(10) ** -50

    rep = algebraicity_report(x, 2, 100, ctx)
    assert rep.verdict == "inconclusive"
    assert rep.evidence.to_text() == "x^2-2"
    assert not rep.evidence.dual_certified


def test_sim_test_gamma_reflection():
    # Gamma(1/3) Gamma(2/3) = 2 pi / sqrt(3)
    r = lambda c: _at(c, lambda: gamma(Fraction(1, 3), c) * gamma(Fraction(2, 3), c))
    s = lambda c: _at(c, lambda: +mpmath.pi)
    rep = sim_test(r, s, 4, 100, CTX)
    assert rep.verdict == "algebraic-found"
    assert rep.evidence.to_text() == "3x^2-4"


def test_gamma_quotient_of_the_constant_itself():
    rep = gamma_quotient_test(lambda c: _at(c, lambda: 7 * gamma_third_constant(c)), CTX, max_deg=2, max_height=100)
    assert rep.evidence.to_text() == "x-7"


def test_in_cyclotomic3():
    x = lambda c: _at(c, lambda: mpmath.mpf(2) / 3 + mpmath.expjpi(mpmath.mpf(2) / 3) / 3)
    res = in_cyclotomic3(x, 100, CTX)
    assert res.member and (res.p, res.q) == (Fraction(2, 3), Fraction(1, 3))
    y = lambda c: _at(c, lambda: mpmath.mpc(mpmath.sqrt(3) / 2, mpmath.mpf(1) / 2))
    assert not in_cyclotomic3(y, 100, CTX).member
