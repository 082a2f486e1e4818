from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import noninteger_fractions
from periodlab.errors import PoleAtNonpositiveInteger
from periodlab.numerics import (
    PrecisionCtx,
    RootOfUnity,
    beta,
    certified_digits,
    certify,
    expi2pi,
    gamma,
    pow_principal,
    rgamma,
    root_of_unity,
    to_mp,
    to_mpc,
)


def test_from_digits_bits():
    assert PrecisionCtx.from_digits(50).bits == 199
    assert PrecisionCtx.from_digits(300).bits == 1031


def test_minimum_precision():
    with pytest.raises(ValueError):
        PrecisionCtx(40)


def test_doubled():
    ctx = PrecisionCtx.from_digits(30)
    assert ctx.doubled().bits == 2 * ctx.bits


def test_work_restores_precision():
    before = mpmath.mp.prec
    with PrecisionCtx(300).work():
        assert mpmath.mp.prec == 300
    assert mpmath.mp.prec == before


def test_to_mp_does_not_round_high_precision_values():
    with PrecisionCtx(400).work():
        x = mpmath.sqrt(2)
    y = to_mp(x)
    with PrecisionCtx(400).work():
        assert y == mpmath.sqrt(2)
    assert to_mpc(x).real == x


def test_fraction_conversion_is_exact_at_context():
    ctx = PrecisionCtx(256)
    with ctx.work():
        assert abs(to_mp(Fraction(1, 3)) * 3 - 1) < mpmath.ldexp(1, -250)


@given(noninteger_fractions(Fraction(-7, 2), Fraction(9, 2)))
def test_gamma_recurrence(x):
    ctx = PrecisionCtx.from_digits(40)
    g0, g1 = gamma(x, ctx), gamma(x + 1, ctx)
    with ctx.work():
        assert abs(g1 - to_mp(x) * g0) <= mpmath.mpf(10) ** -36 * abs(g1)


@given(noninteger_fractions(Fraction(-5, 2), Fraction(7, 2)))
def test_gamma_reflection(x):
    ctx = PrecisionCtx.from_digits(40)
    g, h = gamma(x, ctx), gamma(1 - x, ctx)
    with ctx.work():
        lhs = g * h
        rhs = mpmath.pi / mpmath.sin(mpmath.pi * to_mp(x))
        assert abs(lhs - rhs) <= mpmath.mpf(10) ** -36 * abs(rhs)


@given(st.integers(-6, 0))
def test_gamma_poles_rejected(n):
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma(Fraction(n), PrecisionCtx(64))


def test_rgamma_zero_at_poles():
    assert rgamma(Fraction(-2), PrecisionCtx(64)) == 0


def test_beta_against_gamma():
    ctx = PrecisionCtx.from_digits(40)
    a, b = Fraction(5, 6), Fraction(1, 6)
    with ctx.work():
        assert abs(beta(a, b, ctx) - 2 * mpmath.pi) < mpmath.mpf(10) ** -38


def test_pow_principal_negative_base():
    ctx = PrecisionCtx.from_digits(30)
    v = pow_principal(-4, Fraction(1, 2), ctx)
    with ctx.work():
        assert abs(v - 2j) < mpmath.mpf(10) ** -28


@given(st.integers(1, 12), st.integers(-30, 30))
def test_roots_of_unity(d, i):
    ctx = PrecisionCtx.from_digits(30)
    z = root_of_unity(d, i, ctx)
    with ctx.work():
        assert abs(z**d - 1) < mpmath.mpf(10) ** -27
        assert abs(z - expi2pi(Fraction(i, d), ctx)) < mpmath.mpf(10) ** -27
    assert RootOfUnity(d, i).value(ctx) == z


def test_certified_digits_counts_agreement():
    assert certified_digits(mpmath.mpf("1.2345678"), mpmath.mpf("1.2345679")) >= 6
    assert certified_digits(mpmath.mpf(1), mpmath.mpf(2)) == 0


def test_certify_returns_high_value_and_digits():
    ctx = PrecisionCtx.from_digits(30)

    def fn(c):
        with c.work():
            return mpmath.pi

    _, digits = certify(fn, ctx)
    assert digits >= 30
