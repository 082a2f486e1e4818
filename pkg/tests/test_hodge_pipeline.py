from fractions import Fraction

import mpmath
import pytest

from periodlab.errors import PreconditionError
from periodlab.exact_algebra import QuadraticNumber
from periodlab.hodge_pipeline import (
    codimension_decision,
    fiber_input,
    footbal_check,
    lemmagamma_bridge,
    pullback_chain,
    theorem1_report,
)
from periodlab.numerics import PrecisionCtx

CTX100 = PrecisionCtx.from_digits(100)


@pytest.mark.parametrize(
    "is_cm,d_in_k,expected",
    [(False, None, "2"), (False, True, "2"), (True, True, "1"), (True, False, "undetermined-by-theorem")],
)
def test_decision_table(is_cm, d_in_k, expected):
    assert codimension_decision(is_cm, d_in_k) == expected


def test_pullback_chain_is_exact():
    rep = pullback_chain()
    assert rep.equal and rep.residue_form_holds and rep.passed
    assert rep.pulled_back.A == rep.gauged_companion.A
    assert rep.to_dict()["gauge"] == "diag(1, -3*t)"


def test_fiber_input_kinds():
    f = fiber_input(t=Fraction(1, 5))
    assert f.kind == "t" and f.z == Fraction(27, 400)
    assert fiber_input(z=Fraction(1, 2)).z == Fraction(1, 2)
    g = fiber_input(j=54000)
    assert isinstance(g.z, QuadraticNumber)
    with PrecisionCtx(128).work():
        z = g.z.to_mp()
        assert abs(z * (z - 1) + mpmath.mpf(1) / 125) < mpmath.mpf(10) ** -30
    with pytest.raises(PreconditionError):
        fiber_input(t=1, z=1)
    with pytest.raises(PreconditionError):
        fiber_input()


def test_bridge(ctx50):
    rep = lemmagamma_bridge([Fraction(1, 5), Fraction(3, 10), Fraction(2, 5)], ctx50)
    assert rep.passed
    assert rep.max_deviation < mpmath.mpf(10) ** -30
    assert all(r < mpmath.mpf(10) ** -30 for r in rep.ode_residuals)


def test_bridge_preconditions(ctx50):
    with pytest.raises(PreconditionError):
        lemmagamma_bridge([Fraction(1, 5)], ctx50)
    with pytest.raises(PreconditionError):
        lemmagamma_bridge([0, Fraction(1, 5)], ctx50)


def test_non_cm_fiber_has_codimension_two():
    rep = theorem1_report(fiber_input(t=Fraction(1, 5)), CTX100)
    assert not rep.cm.is_cm
    assert rep.codimension == "2"
    assert rep.part3_condition == "not-evaluated"


def test_cm_fiber_with_schwarz_value_in_field():
    rep = theorem1_report(fiber_input(j=54000), CTX100, gamma_tests=False)
    assert rep.cm.discriminant == -12
    assert rep.in_field.member
    assert (rep.in_field.p, rep.in_field.q) == (Fraction(2, 3), Fraction(1, 3))
    assert rep.codimension == "1"


def test_cm_fiber_with_schwarz_value_outside_field():
    rep = theorem1_report(fiber_input(j=1728), CTX100, max_deg=4, max_height=100, gamma_tests=False)
    assert rep.cm.discriminant == -4
    assert not rep.in_field.member
    assert rep.codimension == "undetermined-by-theorem"
    assert rep.schwarz_algebraicity.evidence.to_text() == "x^4-x^2+1"


def test_negative_z_fiber():
    rep = theorem1_report(fiber_input(j=-12288000), CTX100, gamma_tests=False)
    assert rep.cm.discriminant == -27
    assert (rep.in_field.p, rep.in_field.q) == (Fraction(3, 7), Fraction(2, 7))
    assert rep.codimension == "1"


def test_report_is_deterministic():
    a = theorem1_report(fiber_input(j=54000), CTX100, gamma_tests=False).to_dict()
    b = theorem1_report(fiber_input(j=54000), CTX100, gamma_tests=False).to_dict()
    assert a == b


def test_footbal_rejects_point_outside_field():
    with pytest.raises(PreconditionError):
        footbal_check(fiber_input(j=1728), CTX100)


def test_footbal_rejects_non_cm():
    with pytest.raises(PreconditionError):
        footbal_check(fiber_input(t=Fraction(1, 5)), CTX100)


@pytest.mark.slow
def test_footbal_at_j_54000():
    rep = footbal_check(fiber_input(j=54000), PrecisionCtx.from_digits(500))
    assert rep.passed
    assert rep.y1_test.evidence.to_text() == "65536x^12-91125"
    assert rep.y2_test.evidence.to_text() == "65536x^12-66430125"
