"""Acceptance criteria, one test per criterion.

Each test records a one-line summary; conftest prints them after the run.
AC10 is expected to fail: the Gamma relations at j = 54000 have degree 12
and height about 2.7e8, outside the bounds the criterion fixes.
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import settings

from periodlab.algebraicity import algebraicity_report, gamma_quotient_test, sim_test
from periodlab.cli import main
from periodlab.curve_family import (
    differential_pullback_residual,
    identity_residual,
    period_matrix_compare,
    regular_rational_points,
    superelliptic_genus,
)
from periodlab.elliptic import cm_detect, reduced_tau
from periodlab.family_catalog import catalog_names, derive_form_ode, map_spec, singular_locus_consistency
from periodlab.hodge_pipeline import _f_fn, fiber_input, lemmagamma_bridge, pullback_chain
from periodlab.hypergeom import (
    HypergeomParams,
    conjugate,
    det_relation_check,
    monodromy_closed_form,
    numeric_monodromy,
    schwarz_map,
)
from periodlab.numerics import PrecisionCtx, beta

N = 50
CTX = PrecisionCtx.from_digits(N)
FAMILY = HypergeomParams(Fraction(5, 6), Fraction(1, 6), Fraction(1))
OTHER = HypergeomParams(Fraction(1, 2), Fraction(1, 3), Fraction(3, 4))


def _e(x):
    return mpmath.nstr(x, 3)


def test_ac1_cyclic_vector_reproduction(capsys, record_property):
    expected = {
        "∇ω0": "(27t^3-16t)y''+(81t^2-16)y'+15ty=0",
        "∇ω12": "(27t^3-16t)y''+(81t^2-16)y'-21ty=0",
        "ω1": "(27t^3-16t)y'''+54t^2y''-3ty'+3y=0",
        "ω2": "(27t^3-16t)y'''+54t^2y''-3ty'+3y=0",
    }
    got = {}
    for form in expected:
        code = main(["pf", "derive", "--family", "cubic5-x1-x2", "--form", form])
        got[form] = capsys.readouterr().out.strip() if code == 0 else f"exit {code}"
    primitive = all(derive_form_ode("cubic5-x1-x2", f).is_primitive() for f in expected)
    ok = got == expected and primitive
    record_property("detail", "pf derive: " + "; ".join(f"{k} -> {v}" for k, v in got.items()))
    assert ok


def test_ac2_pullback_chain(record_property):
    rep = pullback_chain()
    record_property("detail", f"pulled-back Gauss system == gauged companion: {rep.equal}")
    assert rep.equal


def test_ac3_monodromy(record_property):
    tol = mpmath.mpf(10) ** -(N - 12)
    cf = monodromy_closed_form(FAMILY, CTX)
    M0 = numeric_monodromy(FAMILY, 0, CTX)
    M1 = numeric_monodromy(FAMILY, 1, CTX)
    # the printed conjugated pair corresponds to clockwise loops
    B0 = numeric_monodromy(FAMILY, 0, CTX, orientation=-1)
    B1 = numeric_monodromy(FAMILY, 1, CTX, orientation=-1)
    with CTX.work():
        D = mpmath.diag([1, 1 / (1 - mpmath.expjpi(mpmath.mpf(1) / 3))])
    A0, A1 = conjugate(B0, D, CTX), conjugate(B1, D, CTX)
    with CTX.work():
        d_closed = max(mpmath.mnorm(M0 - cf.A0, 1), mpmath.mnorm(M1 - cf.A1, 1))
        d_pair = max(
            mpmath.mnorm(A0 - mpmath.matrix([[1, -1], [0, 1]]), 1),
            mpmath.mnorm(A1 - mpmath.matrix([[1, 0], [1, 1]]), 1),
        )
        d_order = mpmath.mnorm((A0 * A1) ** 6 - mpmath.eye(2), 1)
        ok = d_closed < tol and d_pair < tol and d_order < tol
    record_property("detail", f"loops vs closed form {_e(d_closed)}, conjugated pair {_e(d_pair)}, "
                              f"(A0A1)^6 - I {_e(d_order)} (tol {_e(tol)})")
    assert ok


def test_ac4_schwarz_special_value(record_property):
    v = schwarz_map(FAMILY, Fraction(1, 2), CTX)
    with CTX.work():
        err = abs(v + mpmath.expjpi(-mpmath.mpf(5) / 6))
        ok_val = err < mpmath.mpf(10) ** -(N - 10)
    rep = algebraicity_report(lambda c: schwarz_map(FAMILY, Fraction(1, 2), c), 8, 100, CTX)
    poly = rep.evidence.to_text() if rep.evidence else None
    record_property("detail", f"|D(1/2) + e^(-5 pi i/6)| = {_e(err)}; {rep.verdict}: {poly}")
    assert ok_val and rep.verdict == "algebraic-found" and poly == "x^4-x^2+1"


def test_ac5_det_relation(record_property):
    tol = mpmath.mpf(10) ** -(N - 12)
    samples = [Fraction(1, 5), Fraction(1, 2), Fraction(7, 10)]
    parts, ok = [], True
    for p in (OTHER, FAMILY):
        rep = det_relation_check(p, samples, CTX)

        # the moduli carry the branch-free content of the ratio
        def const(c, p=p):
            r = det_relation_check(p, samples[:1], c)
            with c.work():
                return abs(r.constant)

        def ref(c, p=p):
            with c.work():
                return mpmath.pi * beta(p.a, p.c - p.a, c) / beta(p.b, p.c - p.b, c)

        sim = sim_test(const, ref, 4, 10**4, CTX)
        found = sim.verdict == "algebraic-found" and sim.evidence.degree <= 4
        ok = ok and rep.max_deviation < tol and found
        parts.append(f"({p.a},{p.b},{p.c}): spread {_e(rep.max_deviation)}, "
                     f"ratio {sim.evidence.to_text() if sim.evidence else sim.verdict}")
    record_property("detail", "; ".join(parts))
    assert ok


def test_ac6_genus(record_property):
    got = [superelliptic_genus(6, (1, 1, 5)), superelliptic_genus(3, (1, 1, 2)), superelliptic_genus(2, (1, 1, 1))]
    record_property("detail", f"genera {got} (expected [5, 2, 1])")
    assert got == [5, 2, 1]


def test_ac7_exact_identities(record_property):
    hm = identity_residual(map_spec("hyperelliptic-model"), [(Fraction(1, 5), Fraction(1, 3))]).samples[0]
    e1 = identity_residual(map_spec("E1"), [(Fraction(2), Fraction(1, 3))]).samples[0]
    failing = {}
    for name in ("E4", "E5"):
        spec = map_spec(name)
        pts = regular_rational_points(spec, 3)
        rep = identity_residual(spec, pts)
        dif = differential_pullback_residual(spec, pts[0])
        failing[name] = (not rep.holds) and (not dif.holds) and rep.matches_expectation
    ok = (hm.holds and hm.lhs == "3481/2025" and e1.holds and e1.lhs == e1.rhs == "12419/192"
          and all(failing.values()))
    record_property("detail", f"y1^2 = {hm.lhs}; E1 sides {e1.lhs} = {e1.rhs}; "
                              f"E4/E5 reported failing: {all(failing.values())}")
    assert ok


def test_ac8_period_matrix(record_property):
    cmp_ = period_matrix_compare(Fraction(1, 3), CTX)
    record_property("detail", f"quadrature vs closed form at z=1/3: {_e(cmp_.max_deviation)}")
    assert cmp_.max_deviation < mpmath.mpf(10) ** -30


def test_ac9_cm_detection(record_property):
    ctx = PrecisionCtx.from_digits(200)
    tau = reduced_tau(fiber_input(z=Fraction(1, 2)).curve, ctx)
    with ctx.work():
        d_tau = abs(tau - 1j)
    half = cm_detect(fiber_input(z=Fraction(1, 2)).curve, 10**6, ctx)
    j54 = cm_detect(fiber_input(j=54000).curve, 10**6, ctx)
    t15 = cm_detect(fiber_input(t=Fraction(1, 5)).curve, 10**6, ctx)
    ok = (d_tau < mpmath.mpf(10) ** -40 and half.discriminant == -4 and j54.is_cm
          and j54.discriminant == -12 and not t15.is_cm)
    record_property("detail", f"z=1/2: |tau-i| {_e(d_tau)}, disc {half.discriminant}; "
                              f"j=54000: disc {j54.discriminant} {j54.relation}; t=1/5: CM {t15.is_cm}")
    assert ok


def test_ac10_gamma_relations(record_property):
    ctx = PrecisionCtx.from_digits(300)
    fib = fiber_input(j=54000)
    rz = gamma_quotient_test(_f_fn(fib, False), ctx, 8, 10**8)
    r1 = gamma_quotient_test(_f_fn(fib, True), ctx, 8, 10**8)
    control = gamma_quotient_test(_f_fn(fiber_input(j=1728), False), ctx, 8, 10**8)
    ok = rz.verdict == "algebraic-found" and r1.verdict == "algebraic-found" and control.verdict == "no-relation-at-bounds"
    record_property("detail", f"j=54000 F(z): {rz.verdict}, F(1-z): {r1.verdict}; j=1728 control: {control.verdict} "
                              "(deg <= 8, height <= 1e8, 300 digits)")
    assert ok


def test_ac11_catalog_consistency(record_property):
    bad = [n for n in catalog_names() if not singular_locus_consistency(n, CTX).passed]
    tol = mpmath.mpf(10) ** -30
    devs = []
    for name in ("cubic5-x1sq-x1x2", "cubic5-x1-x1x2"):
        for chk in singular_locus_consistency(name, CTX).checks:
            for v in chk.apparent:
                devs.append((v["point"], v["verdict"], mpmath.mpf(v["monodromy_deviation"])))
    points = sorted({p for p, _, _ in devs})
    ok = (len(catalog_names()) == 6 and not bad and points == ["2/27", "root of 729t^2+54t+325"]
          and len(devs) == 3 and all(v == "apparent" and d < tol for _, v, d in devs))
    record_property("detail", f"{6 - len(bad)}/6 families consistent; apparent: "
                              + ", ".join(f"{p} ({_e(d)})" for p, _, d in devs))
    assert ok


def test_ac12_bridge(record_property):
    rep = lemmagamma_bridge([Fraction(1, 5), Fraction(3, 10), Fraction(2, 5)], CTX)
    record_property("detail", f"max deviation {_e(rep.max_deviation)}, "
                              f"max ODE residual {_e(max(rep.ode_residuals))}")
    assert rep.passed and rep.max_deviation < mpmath.mpf(10) ** -30


def test_ac13_property_suites(record_property):
    import test_curve_family
    import test_hypergeom
    import test_numerics
    import test_ode_engine

    draws = max(10, settings.default.max_examples)
    props = {
        "gamma recurrence": test_numerics.test_gamma_recurrence,
        "gamma reflection": test_numerics.test_gamma_reflection,
        "f21 a<->b": test_hypergeom.test_f21_symmetric_in_a_b,
        "contiguity": test_hypergeom.test_khyanat_contiguity,
        "derivative identity": test_hypergeom.test_derivative_identity,
        "Pochhammer identity": test_curve_family.test_pochhammer_identity,
        "path independence": test_ode_engine.test_path_independence,
    }
    results = {}
    for name, fn in props.items():
        try:
            settings(max_examples=draws, derandomize=True, deadline=None)(fn)()
            results[name] = "ok"
        except Exception as exc:  # noqa: BLE001 - report every suite
            results[name] = f"FAILED ({type(exc).__name__})"
    record_property("detail", f"{draws} draws each: " + ", ".join(f"{k} {v}" for k, v in results.items()))
    assert all(v == "ok" for v in results.values())


@pytest.mark.slow
def test_gamma_relations_at_extended_bounds():
    # what AC10 needs: degree 12 and height above 1e8
    ctx = PrecisionCtx.from_digits(500)
    fib = fiber_input(j=54000)
    rz = gamma_quotient_test(_f_fn(fib, False), ctx, 12, 10**9)
    r1 = gamma_quotient_test(_f_fn(fib, True), ctx, 12, 10**9)
    assert rz.evidence.to_text() == "268435456x^12-91125"
    assert r1.evidence.to_text() == "268435456x^12-66430125"
    assert rz.verdict == r1.verdict == "algebraic-found"
