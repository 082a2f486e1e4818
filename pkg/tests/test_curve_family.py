import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import fractions, noninteger_fractions
from periodlab.curve_family import (
    PochhammerCycleSpec,
    SuperellipticModel,
    differential_pullback_residual,
    eta_period,
    identity_residual,
    period_matrix_compare,
    pochhammer_contour_integral,
    random_rational_points,
    regular_rational_points,
    superelliptic_genus,
)
from periodlab.errors import BranchAmbiguity, DegenerateBranchData, PreconditionError
from periodlab.family_catalog import map_spec, map_specs
from periodlab.numerics import PrecisionCtx, to_mp

CTX = PrecisionCtx.from_digits(30)
TOL = mpmath.mpf(10) ** -25


@pytest.mark.parametrize("k,exps,g", [(6, (1, 1, 5), 5), (3, (1, 1, 2), 2), (2, (1, 1, 1), 1)])
def test_genus_fixtures(k, exps, g):
    assert superelliptic_genus(k, exps) == g


def test_genus_of_hyperelliptic_curves():
    # y^2 = cubic is elliptic; y^2 = x(1-x)(z-x)^3 is also elliptic
    assert superelliptic_genus(2, (1, 1, 3)) == 1
    assert SuperellipticModel(6, (1, 1, 5), Fraction(1, 3)).genus == 5


@given(st.integers(2, 12), st.data())
def test_genus_invariant_under_units_and_permutations(k, data):
    exps = data.draw(st.lists(st.integers(1, k - 1), min_size=3, max_size=3))
    assume(math.gcd(k, *exps) == 1)
    g = superelliptic_genus(k, exps)
    units = [u for u in range(1, k) if math.gcd(u, k) == 1]
    u = data.draw(st.sampled_from(units))
    assert superelliptic_genus(k, [u * e for e in exps]) == g
    assert superelliptic_genus(k, list(reversed(exps))) == g
    assert g >= 0


def test_genus_preconditions():
    with pytest.raises(DegenerateBranchData):
        superelliptic_genus(6, (2, 2, 2))
    with pytest.raises(DegenerateBranchData):
        superelliptic_genus(3, (1, 3, 1))
    with pytest.raises(DegenerateBranchData):
        superelliptic_genus(1, (1, 1, 1))


def test_hyperelliptic_model_fixture():
    rep = identity_residual(map_spec("hyperelliptic-model"), [(Fraction(1, 5), Fraction(1, 3))])
    (s,) = rep.samples
    assert rep.mode == "exact" and rep.holds
    assert s.lhs == s.rhs == "3481/2025"


def test_first_elliptic_quotient_fixture():
    rep = identity_residual(map_spec("E1"), [(Fraction(2), Fraction(1, 3))])
    (s,) = rep.samples
    assert rep.holds
    assert s.lhs == s.rhs == "12419/192"


@pytest.mark.parametrize("name", ["E4", "E5"])
def test_printed_quotients_fail(name):
    spec = map_spec(name)
    pts = regular_rational_points(spec, 3)
    rep = identity_residual(spec, pts)
    assert not rep.holds and rep.matches_expectation
    dif = differential_pullback_residual(spec, pts[0])
    assert not dif.holds and dif.matches_expectation


@pytest.mark.parametrize("spec", map_specs(), ids=lambda s: s.name)
def test_every_map_matches_its_expectation(spec):
    pts = regular_rational_points(spec, 3, seed=7)
    assert identity_residual(spec, pts).matches_expectation
    if spec.differential:
        assert differential_pullback_residual(spec, pts[0]).matches_expectation


def test_random_points_are_reproducible():
    spec = map_spec("E1")
    assert random_rational_points(spec, 4, seed=3) == random_rational_points(spec, 4, seed=3)


def test_differential_needs_claim():
    with pytest.raises(PreconditionError):
        differential_pullback_residual(map_spec("sigma-xy"), (Fraction(1, 5), Fraction(1, 3)))


@given(
    noninteger_fractions(Fraction(-19, 10), Fraction(19, 10), 10),
    noninteger_fractions(Fraction(-19, 10), Fraction(19, 10), 10),
)
def test_pochhammer_identity(ea, eb):
    # commutator contour around 0 and 1 against the segment integral in Beta form
    v = pochhammer_contour_integral([(0, ea), (1, eb)], 0, 1, CTX)
    with CTX.work():
        E = lambda x: mpmath.expjpi(2 * to_mp(x))
        seg = mpmath.expjpi(to_mp(eb)) * mpmath.beta(to_mp(ea) + 1, to_mp(eb) + 1)
        ref = (1 - E(ea)) * (1 - E(eb)) * seg
        assert abs(v - ref) < TOL * max(1, abs(ref))


def test_pochhammer_rejects_inside_branch_point():
    with pytest.raises(BranchAmbiguity):
        pochhammer_contour_integral([(0, Fraction(1, 3)), (1, Fraction(1, 3)), (Fraction(1, 4), Fraction(1, 2))], 0, 1, CTX)


@given(fractions(Fraction(1, 10), Fraction(9, 10), 10))
def test_period_matrix_matches_closed_form(z):
    cmp_ = period_matrix_compare(z, CTX)
    assert cmp_.max_deviation < TOL


def test_period_matrix_bridge_fixture(ctx50):
    cmp_ = period_matrix_compare(Fraction(1, 3), ctx50)
    assert cmp_.max_deviation < mpmath.mpf(10) ** -30


def test_eta_period_on_the_segment_zero_z():
    # eta_1 over (0, z) with the (2;1,1,1) data: the segment integral is 2 K(z)
    z = Fraction(1, 2)
    v = eta_period(2, (1, 1, 1), z, PochhammerCycleSpec(("0", "z")), "eta1", CTX)
    with CTX.work():
        assert abs(v - 4 * 2 * mpmath.ellipk(to_mp(z))) < TOL


def test_period_matrix_needs_real_z():
    with pytest.raises(PreconditionError):
        period_matrix_compare(Fraction(3, 2), CTX)


def test_cycle_endpoints():
    with pytest.raises(ValueError):
        PochhammerCycleSpec(("z", "0"))
