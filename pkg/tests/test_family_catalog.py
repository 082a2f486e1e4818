from fractions import Fraction

import mpmath
import pytest

from periodlab.errors import UnknownFamily
from periodlab.exact_algebra import parse_poly
from periodlab.family_catalog import (
    catalog_get,
    catalog_names,
    critical_values,
    derivative_equation,
    derive_form_ode,
    normalize_label,
    parse_f,
    parse_stanzas,
    singular_locus_consistency,
)
from periodlab.numerics import PrecisionCtx, to_mpc

CTX = PrecisionCtx.from_digits(30)

FAMILIES = [
    "cubic5-x1-x2",
    "cubic5-x1x2",
    "cubic5-x1sq-x2sq",
    "cubic5-x1sq-x1x2",
    "cubic5-x1sq-x1",
    "cubic5-x1-x1x2",
]


def test_six_families():
    assert catalog_names() == FAMILIES


@pytest.mark.parametrize(
    "label,ode",
    [
        ("∇ω0", "(27t^3-16t)y''+(81t^2-16)y'+15ty=0"),
        ("∇ω₁₂", "(27t^3-16t)y''+(81t^2-16)y'-21ty=0"),
        ("ω1", "(27t^3-16t)y'''+54t^2y''-3ty'+3y=0"),
        ("ω2", "(27t^3-16t)y'''+54t^2y''-3ty'+3y=0"),
    ],
)
def test_cyclic_vector_derivations(label, ode):
    derived = derive_form_ode("cubic5-x1-x2", label)
    assert str(derived) == ode
    assert derived == catalog_get("cubic5-x1-x2").ode(label)
    assert derived.is_primitive()


def test_label_normalization():
    assert normalize_label("∇ω0") == "nabla-omega0"
    assert normalize_label("ω_{12}") == "omega12"
    assert normalize_label("nabla omega12") == "nabla-omega12"


def test_unknown_family_and_label():
    with pytest.raises(UnknownFamily):
        catalog_get("quartic")
    with pytest.raises(UnknownFamily):
        catalog_get("cubic5-x1-x2").ode("omega7")
    with pytest.raises(UnknownFamily):
        derive_form_ode("cubic5-x1x2", "omega0")


def test_stanza_parser():
    version, stanzas = parse_stanzas("format: 1\n[family a]\nf: x1\node[omega0]: 1; t\nnote: x\nnote: y\n")
    assert version == 1
    (st,) = stanzas
    assert st.kind == "family" and st.name == "a"
    assert st.fields["note"] == ["x", "y"]
    assert st.labelled["ode"]["omega0"] == "1; t"


def test_critical_values_separable():
    # h = x1^3 - x1 + x2^3 - x2 has critical points x_i = +-1/sqrt(3)
    cv = critical_values("cubic5-x1-x2", CTX)
    assert cv.polynomial == parse_poly("27t^3-16t")
    with CTX.work():
        w = 2 / (3 * mpmath.sqrt(3))
        expect = sorted([-2 * w, 0, 2 * w])
        for v, e in zip(cv.values, expect):
            assert abs(v.value - e) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("name", FAMILIES)
def test_critical_values_are_critical(name):
    cv = critical_values(name, CTX)
    h = parse_f(catalog_get(name).f)
    with CTX.work():
        tol = mpmath.mpf(10) ** -20
        for a, b in cv.points:
            pt = [a, b, 0, 0, 0]
            assert all(abs(to_mpc(h.diff(i).substitute(pt))) < tol for i in range(5))
        assert len(cv.values) == cv.polynomial.degree


def test_leading_factored_matches_ode():
    rec = catalog_get("cubic5-x1sq-x1x2")
    for label, text in rec.leading_factored:
        assert parse_poly(text).monic() == rec.ode(label).leading.monic()


@pytest.mark.parametrize("name", FAMILIES)
def test_singular_locus_consistency(name):
    rep = singular_locus_consistency(name, CTX)
    assert rep.passed
    for c in rep.checks:
        assert c.contains_criticals


def test_apparent_point_two_over_27():
    rep = singular_locus_consistency("cubic5-x1sq-x1x2", CTX)
    (check,) = rep.checks
    assert check.leftover == parse_poly("27t-2")
    (v,) = check.apparent
    assert v["verdict"] == "apparent" and v["point"] == "2/27"


def test_apparent_quadratic_pair():
    rep = singular_locus_consistency("cubic5-x1-x1x2", CTX)
    (check,) = rep.checks
    assert check.leftover == parse_poly("729t^2+54t+325")
    assert [v["verdict"] for v in check.apparent] == ["apparent", "apparent"]
    assert all(mpmath.mpf(v["monodromy_deviation"]) < mpmath.mpf(10) ** -20 for v in check.apparent)


def test_printed_derivative_equation_mismatch_is_reported():
    # derived from the omega0 equation; the stored nabla-omega0 equation differs
    rep = singular_locus_consistency("cubic5-x1x2", CTX, run_apparent=False)
    (d,) = rep.derivative_checks
    assert not d["agrees"]
    assert d["derived"] == "(27t^2+t)y''+(54t+1)y'+6y=0"
    rec = catalog_get("cubic5-x1x2")
    assert str(derivative_equation(rec.ode("omega0"))) == d["derived"]


def test_derivative_equation_of_exponential():
    # y = exp(t) gives y' = exp(t) again
    from periodlab.ode_engine import ScalarODE

    ode = ScalarODE.parse(["-1", "1"])
    with pytest.raises(ValueError):
        derivative_equation(ode)
    ode2 = ScalarODE.parse(["-1", "0", "1"])
    assert derivative_equation(ode2) == ode2
