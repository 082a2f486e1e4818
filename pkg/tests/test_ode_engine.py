from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fractions
from periodlab.errors import NoRelationWithinCap, PathTooCloseToSingularity, SingularGauge
from periodlab.exact_algebra import Poly, RatFuncMatrix, parse_poly
from periodlab.hypergeom import HypergeomParams, f21, gauss_ode, gauss_system, hyp2f1_with_derivative
from periodlab.numerics import PrecisionCtx, to_mp
from periodlab.ode_engine import (
    CPath,
    FirstOrderSystem,
    ScalarODE,
    apparent_singularity_test,
    continue_solution,
    gauge_transform,
    indicial_exponents,
    loop_monodromy,
    pullback,
    square_loop,
    system_to_scalar,
)

CTX = PrecisionCtx.from_digits(30)
TOL = mpmath.mpf(10) ** -25
FAMILY = HypergeomParams(Fraction(5, 6), Fraction(1, 6), Fraction(1))


def test_normalized_is_primitive_and_positive():
    ode = ScalarODE.normalized([Fraction(5, 3), parse_poly("-t/2"), parse_poly("-t^2+t")])
    assert ode.is_primitive()
    assert ode.leading.lc > 0
    assert str(ode) == "(6t^2-6t)y''+3ty'-10y=0"


def test_reduced_order():
    ode = ScalarODE.parse(["0", "3", "t"])
    assert str(ode.reduced_order()) == "ty'+3y=0"
    with pytest.raises(ValueError):
        ScalarODE.parse(["1", "t"]).reduced_order()


def test_cyclic_vector_recovers_gauss_equation():
    # the first coordinate of the companion frame satisfies the scalar equation itself
    ode = gauss_ode(FAMILY)
    assert system_to_scalar(ode.companion(), 0) == ode


def test_order_cap():
    with pytest.raises(NoRelationWithinCap):
        system_to_scalar(gauss_system(FAMILY), 0, order_cap=1)


def test_identity_gauge_and_trivial_pullback():
    S = gauss_system(FAMILY, "t")
    assert gauge_transform(S, RatFuncMatrix([[1, 0], [0, 1]])) == S
    assert pullback(S, Poly.t()) == S
    with pytest.raises(SingularGauge):
        gauge_transform(S, RatFuncMatrix([[1, 1], [1, 1]]))


def test_gauge_composes():
    S = gauss_system(FAMILY, "t")
    G = RatFuncMatrix([[1, 0], [0, parse_poly("t")]])
    H = RatFuncMatrix([[1, parse_poly("t")], [0, 1]])
    assert gauge_transform(gauge_transform(S, G), H) == gauge_transform(S, H * G)


def test_indicial_exponents_of_gauss_equation():
    p = HypergeomParams(Fraction(1, 2), Fraction(1, 3), Fraction(3, 4))
    ode = gauss_ode(p)
    assert sorted(indicial_exponents(ode, 0)) == sorted([Fraction(0), 1 - p.c])
    assert sorted(indicial_exponents(ode, 1)) == sorted([Fraction(0), p.c - p.a - p.b])
    assert sorted(indicial_exponents(ode, "inf")) == sorted([p.a, p.b])


def test_continuation_of_exponential():
    ode = ScalarODE.parse(["-1", "1"])
    out = continue_solution(ode, [1], CPath((0, 3)), CTX)
    with CTX.work():
        assert abs(out[0, 0] - mpmath.e ** 3) < TOL * 30


def test_continuation_matches_closed_form_inside_disk():
    p = HypergeomParams(Fraction(1, 2), Fraction(1, 3), Fraction(3, 4))
    F0, dF0 = hyp2f1_with_derivative(p, Fraction(1, 10), CTX)
    out = continue_solution(gauss_ode(p), [F0, dF0], CPath((Fraction(1, 10), Fraction(7, 10))), CTX)
    with CTX.work():
        assert abs(out[0, 0] - f21(p, Fraction(7, 10), CTX)) < TOL


@given(
    fractions(Fraction(1, 10), Fraction(9, 10), 10),
    fractions(Fraction(1, 10), Fraction(9, 10), 10),
    fractions(Fraction(-2, 5), Fraction(2, 5), 10).filter(lambda y: y != 0),
)
def test_path_independence(x_end, x_mid, y_mid):
    # two polylines from 1/2 that enclose no singular point give the same values
    S = gauss_system(FAMILY)
    with CTX.work():
        start = mpmath.mpc(0.5)
        end = mpmath.mpc(to_mp(x_end), 0)
        mid = mpmath.mpc(to_mp(x_mid), to_mp(y_mid))
        ident = mpmath.eye(2)
    direct = continue_solution(S, ident, CPath((start, end)), CTX)
    detour = continue_solution(S, ident, CPath((start, mid, end)), CTX)
    with CTX.work():
        assert mpmath.mnorm(direct - detour, 1) < TOL * 100


def test_path_too_close():
    with pytest.raises(PathTooCloseToSingularity):
        continue_solution(gauss_system(FAMILY), [1, 0], CPath((Fraction(-1, 2), Fraction(1, 2))), CTX)


def test_cpath_parse():
    p = CPath.parse("0.5; 0.5,0.5; 0.25")
    assert len(p.vertices) == 3
    assert p.vertices[1] == mpmath.mpc(0.5, 0.5)


def test_square_loop_orientation():
    fwd = square_loop(Fraction(1, 2), 0, [0, 1], CTX)
    back = square_loop(Fraction(1, 2), 0, [0, 1], CTX, orientation=-1)
    assert fwd.vertices == tuple(reversed(back.vertices))
    assert fwd.vertices[0] == fwd.vertices[-1]


@given(fractions(Fraction(1, 7), Fraction(6, 7), 7))
def test_monodromy_of_power(alpha):
    # y' = (alpha/t) y has the solution t^alpha, multiplied by E(alpha) around 0
    ode = ScalarODE.normalized([-alpha, parse_poly("t")])
    fwd = loop_monodromy(ode, Fraction(1, 2), 0, CTX).matrix
    back = loop_monodromy(ode, Fraction(1, 2), 0, CTX, orientation=-1).matrix
    with CTX.work():
        E = mpmath.expjpi(2 * to_mp(alpha))
        assert abs(fwd[0, 0] - E) < TOL
        assert abs(back[0, 0] - 1 / E) < TOL


def test_apparent_singularity():
    # solutions 1 and t^3
    v = apparent_singularity_test(ScalarODE.parse(["0", "-2", "t"]), 0, CTX, base=Fraction(1, 2))
    assert v.verdict == "apparent"
    assert sorted(v.exponents) == [0, 3]


def test_logarithmic_singularity():
    # solutions 1 and log t
    v = apparent_singularity_test(ScalarODE.parse(["0", "1", "t"]), 0, CTX, base=Fraction(1, 2))
    assert v.verdict == "true_singularity"
    assert not v.exponents_ok and not v.monodromy_ok


@pytest.mark.parametrize("point", [0, 1])
def test_gauss_points_are_true_singularities(point):
    v = apparent_singularity_test(gauss_ode(FAMILY), point, CTX, base=Fraction(1, 2))
    assert v.verdict == "true_singularity"


def test_system_singular_points():
    pts = FirstOrderSystem(gauss_system(FAMILY).A).singular_points(CTX)
    assert sorted(round(float(mpmath.re(p)), 12) for p in pts) == [0.0, 1.0]
