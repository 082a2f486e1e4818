"""Hodge-cycle codimension reports for the cubic fourfold family, routed through E_t.

The fourfold periods are never integrated directly.  Everything goes through
the elliptic curve E_t: y^2 = x^3 - 3x + 2 - (27/4) t^2 with z = (27/16) t^2
and the Gauss data (5/6, 1/6, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from .algebraicity import (
    DEFAULT_MAX_DEG,
    DEFAULT_MAX_HEIGHT,
    AlgebraicityReport,
    Cyclotomic3Result,
    algebraicity_report,
    gamma_quotient_test,
    gamma_third_constant,
    in_cyclotomic3,
    sim_test,
)
from .elliptic import (
    CMDecision,
    EllipticCurveModel,
    cm_detect,
    curve_from_t,
    curve_from_z,
    periods,
    z_from_j,
)
from .errors import PreconditionError
from .exact_algebra import QuadraticNumber, RatFuncMatrix, RationalFunction, as_ratfunc, parse_poly
from .family_catalog import catalog_get
from .hypergeom import HypergeomParams, fundamental_matrix, gauss_ode, gauss_system, hyp2f1, schwarz_map
from .numerics import PrecisionCtx, certified_digits, to_mpc
from .ode_engine import CPath, FirstOrderSystem, continue_solution, gauge_transform, pullback

FAMILY_PARAMS = HypergeomParams(Fraction(5, 6), Fraction(1, 6), Fraction(1))
CM_HEIGHT = 10**6


CHAIN_FAMILY = "cubic5-x1-x2"
CHAIN_FORM = "nabla-omega0"
CHAIN_SUBSTITUTION = "27/16*t^2"
CHAIN_GAUGE = ("1", "-3*t")


# --------------------------------------------------------------------------
# exact pullback chain


@dataclass(frozen=True)
class PullbackChainReport:
    pulled_back: FirstOrderSystem
    gauged_companion: FirstOrderSystem
    equal: bool
    residue_form_holds: bool

    @property
    def passed(self) -> bool:
        return self.equal and self.residue_form_holds

    def to_dict(self) -> dict:
        def m(S):
            return [[str(S.A[i, j]) for j in range(S.dim)] for i in range(S.dim)]

        return {
            "substitution": "z = " + CHAIN_SUBSTITUTION,
            "gauge": f"diag({CHAIN_GAUGE[0]}, {CHAIN_GAUGE[1]})",
            "pulled_back": m(self.pulled_back),
            "gauged_companion": m(self.gauged_companion),
            "equal": self.equal,
            "residue_form_holds": self.residue_form_holds,
            "passed": self.passed,
        }


def pullback_chain() -> PullbackChainReport:
    """Gauss system (5/6, 1/6, 1) under z = (27/16) t^2 against the cubic family's ODE.

    With G = diag(1, -3t), the companion system of the catalog equation for
    the derivative form, transformed by Y = G (y, y')^T, must equal the pulled
    back system exactly; the latter must also split as R0/t + 54t/(27t^2-16) R1
    with R0 = [[0,-1/3],[0,0]] and R1 = [[0,0],[5/6,-1]].
    """
    pb = pullback(gauss_system(FAMILY_PARAMS), parse_poly(CHAIN_SUBSTITUTION), "t")
    ode = catalog_get(CHAIN_FAMILY).ode(CHAIN_FORM)
    G = RatFuncMatrix.diag([as_ratfunc(parse_poly(g)) for g in CHAIN_GAUGE])
    gauged = gauge_transform(ode.companion(), G)
    t = parse_poly("t")
    r0 = RationalFunction(parse_poly("1"), t)
    r1 = RationalFunction(parse_poly("54*t"), parse_poly("27*t^2-16"))
    third, sixth = Fraction(1, 3), Fraction(5, 6)
    expected = [[as_ratfunc(0), r0 * as_ratfunc(-third)], [r1 * as_ratfunc(sixth), r1 * as_ratfunc(-1)]]
    split = all(pb.A[i, j] == expected[i][j] for i in range(2) for j in range(2))
    return PullbackChainReport(pb, gauged, gauged.A == pb.A, split)


# --------------------------------------------------------------------------
# inputs


@dataclass(frozen=True)
class FiberInput:
    """Where the user put the fiber: by t, z or j, with the exact z it gives."""

    kind: str
    value: object
    z: object
    curve: EllipticCurveModel
    note: str = ""

    def z_mp(self, ctx: PrecisionCtx):
        with ctx.work():
            if isinstance(self.z, QuadraticNumber):
                return mpmath.mpc(self.z.to_mp())
            return to_mpc(self.z)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": str(self.value), "z": str(self.z), "curve": str(self.curve), "note": self.note}


def fiber_input(t=None, z=None, j=None) -> FiberInput:
    given = [k for k, v in (("t", t), ("z", z), ("j", j)) if v is not None]
    if len(given) != 1:
        raise PreconditionError("give exactly one of t, z, j")
    if t is not None:
        curve, zz = curve_from_t(Fraction(t))
        return FiberInput("t", Fraction(t), zz, curve)
    if z is not None:
        zf = Fraction(z)
        return FiberInput("z", zf, zf, curve_from_z(zf))
    root = z_from_j(j)
    return FiberInput("j", Fraction(j), root.z, curve_from_z(root.z), note=f"z choice: {root.choice}; other root {root.other}")


# --------------------------------------------------------------------------
# decision table


def codimension_decision(is_cm: bool, d_in_k: Optional[bool]) -> str:
    """Codimension of the Hodge cycles of M_t over k.

    Not CM gives 2.  CM with the Schwarz value D in k gives 1.  CM with D not
    recognised in k is not decided: the theorem only states an implication.
    """
    if not is_cm:
        return "2"
    if d_in_k:
        return "1"
    return "undetermined-by-theorem"


@dataclass
class HodgeReport:
    fiber: FiberInput
    field: str
    cm: CMDecision
    schwarz_value: object = None
    schwarz_digits: int = 0
    schwarz_algebraicity: Optional[AlgebraicityReport] = None
    in_field: Optional[Cyclotomic3Result] = None
    codimension: str = ""
    gamma_z: Optional[AlgebraicityReport] = None
    gamma_one_minus_z: Optional[AlgebraicityReport] = None
    precision_bits: int = 0
    bounds: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def part3_condition(self) -> str:
        if self.gamma_z is None or self.gamma_one_minus_z is None:
            return "not-evaluated"
        both = self.gamma_z.verdict == "algebraic-found" and self.gamma_one_minus_z.verdict == "algebraic-found"
        return "satisfied" if both else "not-found-at-bounds"

    def to_dict(self) -> dict:
        d = self.schwarz_digits
        out = {
            "input": self.fiber.to_dict(),
            "field": self.field,
            "cm": self.cm.to_dict(),
            "codimension": self.codimension,
            "schwarz_value": None if self.schwarz_value is None else mpmath.nstr(self.schwarz_value, max(5, d)),
            "schwarz_certified_digits": d,
            "schwarz_algebraicity": None if self.schwarz_algebraicity is None else self.schwarz_algebraicity.to_dict(),
            "in_field": None if self.in_field is None else self.in_field.to_dict(),
            "gamma_relation_z": None if self.gamma_z is None else self.gamma_z.to_dict(),
            "gamma_relation_one_minus_z": None if self.gamma_one_minus_z is None else self.gamma_one_minus_z.to_dict(),
            "part3_condition": self.part3_condition,
            "precision_bits": self.precision_bits,
            "bounds": dict(self.bounds),
            "notes": list(self.notes),
        }
        return out


def _schwarz_fn(fiber: FiberInput):
    def D(c: PrecisionCtx):
        return schwarz_map(FAMILY_PARAMS, fiber.z_mp(c), c)

    return D


def _f_fn(fiber: FiberInput, reflect: bool):
    # real z < 0 is read as z + i0, so 1 - z sits on the lower side of the cut
    def value(c: PrecisionCtx):
        zz = fiber.z_mp(c)
        with c.work():
            arg = 1 - zz if reflect else zz
            side = -1 if (reflect and zz.imag == 0 and zz.real < 0) else 0
        return hyp2f1(FAMILY_PARAMS, arg, c, side=side)

    return value


def theorem1_report(
    fiber: FiberInput,
    ctx: PrecisionCtx,
    max_deg: int = DEFAULT_MAX_DEG,
    max_height: int = DEFAULT_MAX_HEIGHT,
    cm_height: int = CM_HEIGHT,
    gamma_tests: bool = True,
) -> HodgeReport:
    """CM test, Schwarz value, field membership and the Gamma relations for one fiber."""
    cm = cm_detect(fiber.curve, cm_height, ctx)
    bounds = {"max_deg": max_deg, "max_height": max_height, "cm_height": cm_height}
    rep = HodgeReport(fiber, "Q(zeta3)", cm, precision_bits=ctx.bits, bounds=bounds)
    if not cm.is_cm:
        rep.codimension = codimension_decision(False, None)
        rep.notes.append(f"no CM relation with coefficients up to {cm_height}; non-CM is bound-relative")
        return rep
    D = _schwarz_fn(fiber)
    lo, hi = D(ctx), D(ctx.doubled())
    with ctx.doubled().work():
        rep.schwarz_digits = min(ctx.digits, certified_digits(lo, hi))
    rep.schwarz_value = hi
    rep.schwarz_algebraicity = algebraicity_report(D, max_deg, max_height, ctx)
    rep.in_field = in_cyclotomic3(D, max_height, ctx)
    rep.codimension = codimension_decision(True, rep.in_field.member)
    if gamma_tests:
        rep.gamma_z = gamma_quotient_test(_f_fn(fiber, False), ctx, max_deg, max_height)
        rep.gamma_one_minus_z = gamma_quotient_test(_f_fn(fiber, True), ctx, max_deg, max_height)
        rep.notes.append("the reverse direction of the Gamma criterion cannot be certified: absence of a relation is bound-relative")
    return rep


# --------------------------------------------------------------------------
# elliptic periods through the Gauss equation


@dataclass
class BridgeReport:
    samples: List[object]
    periods: List[List[object]]  # per sample: the two periods from the lattice
    propagated: List[List[object]]
    deviations: List[object]
    ode_residuals: List[object]
    max_deviation: object
    tolerance: object
    precision_bits: int

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance and all(r < self.tolerance for r in self.ode_residuals)

    def to_dict(self) -> dict:
        return {
            "samples": [str(s) for s in self.samples],
            "periods": [[mpmath.nstr(w, 20) for w in ws] for ws in self.periods],
            "deviations": [mpmath.nstr(d, 5) for d in self.deviations],
            "ode_residuals": [mpmath.nstr(r, 5) for r in self.ode_residuals],
            "max_deviation": mpmath.nstr(self.max_deviation, 5),
            "tolerance": mpmath.nstr(self.tolerance, 5),
            "passed": self.passed,
            "precision_bits": self.precision_bits,
        }


def _lattice_periods(z, ctx: PrecisionCtx):
    """Real and imaginary periods of y^2 = x^3 - 3x + 2 - 4z for z in (0, 1)."""
    with ctx.work():
        zz = mpmath.mpf(z) if not isinstance(z, Fraction) else mpmath.mpf(z.numerator) / z.denominator
        curve = EllipticCurveModel("weierstrass", (mpmath.mpf(-3), 2 - 4 * zz))
    lat = periods(curve, ctx, method="agm")
    with ctx.work():
        ws = sorted([lat.omega1, lat.omega2], key=lambda w: abs(w.imag))
        return [mpmath.mpc(ws[0]), mpmath.mpc(ws[1])]


def lemmagamma_bridge(z_samples: Sequence, ctx: PrecisionCtx, tolerance=None) -> BridgeReport:
    """Elliptic periods of E, as functions of z, solve the (5/6, 1/6, 1) Gauss equation.

    Each period and its z-derivative at the first sample are propagated by the
    Taylor integrator through the later samples and compared with the lattice
    computed there directly.  The ODE residual at each sample uses numerical
    derivatives of the period function at doubled precision.
    """
    zs = [Fraction(s) if not isinstance(s, Fraction) else s for s in z_samples]
    if len(zs) < 2:
        raise PreconditionError("need at least two samples")
    for s in zs:
        if not (Fraction(1, 20) <= s <= Fraction(19, 20)):
            raise PreconditionError(f"sample {s} must lie in [0.05, 0.95]")
    ode = gauss_ode(FAMILY_PARAMS)
    hi = ctx.doubled()
    tol = mpmath.mpf(10) ** -30 if tolerance is None else mpmath.mpf(tolerance)

    def period_fn(k):
        # mpmath.diff raises the working precision; follow it
        def f(zv):
            return _lattice_periods(zv, PrecisionCtx(max(mpmath.mp.prec, hi.bits)))[k]

        return f

    values, derivs, residuals = [], [], []
    for s in zs:
        ws = _lattice_periods(s, ctx)
        values.append(ws)
        row_d, res_s = [], mpmath.mpf(0)
        for k in range(2):
            with hi.work():
                zv = mpmath.mpf(s.numerator) / s.denominator
                d1, d2 = mpmath.diff(period_fn(k), zv, 1), mpmath.diff(period_fn(k), zv, 2)
                w = period_fn(k)(zv)
                r = ode.apply([w, d1, d2], zv)
                scale = max(abs(zv * (1 - zv) * d2), abs(d1), abs(w))
                res_s = max(res_s, abs(r) / scale)
            row_d.append(d1)
        derivs.append(row_d)
        residuals.append(res_s)
    with ctx.work():
        init = mpmath.matrix([[values[0][0], values[0][1]], [derivs[0][0], derivs[0][1]]])
        pts = [mpmath.mpf(s.numerator) / s.denominator for s in zs]
    propagated = [[values[0][0], values[0][1]]]
    deviations = [mpmath.mpf(0)]
    Y = init
    for a, b, s_idx in zip(pts, pts[1:], range(1, len(pts))):
        Y = continue_solution(ode, Y, CPath((a, b)), ctx)
        with ctx.work():
            got = [Y[0, 0], Y[0, 1]]
            dev = max(abs(got[k] - values[s_idx][k]) / abs(values[s_idx][k]) for k in range(2))
        propagated.append(got)
        deviations.append(dev)
    return BridgeReport(zs, values, propagated, deviations, residuals, max(deviations), tol, ctx.bits)


# --------------------------------------------------------------------------
# period values at a CM point


@dataclass
class FootbalReport:
    fiber: FiberInput
    schwarz_in_field: Cyclotomic3Result
    y1: object
    y2: object
    y1_test: AlgebraicityReport
    y2_test: AlgebraicityReport
    precision_bits: int
    bounds: dict

    @property
    def passed(self) -> bool:
        return self.y1_test.verdict == "algebraic-found" and self.y2_test.verdict == "algebraic-found"

    def to_dict(self) -> dict:
        return {
            "input": self.fiber.to_dict(),
            "schwarz_in_field": self.schwarz_in_field.to_dict(),
            "y1": mpmath.nstr(self.y1, 30),
            "y2": mpmath.nstr(self.y2, 30),
            "y1_vs_gamma3_over_pi": self.y1_test.to_dict(),
            "y2_vs_gamma3_over_pi": self.y2_test.to_dict(),
            "passed": self.passed,
            "precision_bits": self.precision_bits,
            "bounds": dict(self.bounds),
        }


def _eta1_periods(z, ctx: PrecisionCtx):
    """First row of the (akh) period matrix at z (real z < 0 read as z + i0)."""
    M = fundamental_matrix(FAMILY_PARAMS, z, ctx).entries
    with ctx.work():
        return [M[0, 0], M[0, 1]]


def footbal_check(fiber: FiberInput, ctx: PrecisionCtx, max_deg: int = 12, max_height: int = 10**9,
                  cm_height: int = CM_HEIGHT) -> FootbalReport:
    """Both periods Y1, Y2 of eta_1 at a CM point with D in Q(zeta3) are ~ Gamma(1/3)^3/pi.

    Y1, Y2 are the first-row entries of the period matrix over [0,z] and [1,z].
    """
    cm = cm_detect(fiber.curve, cm_height, ctx)
    if not cm.is_cm:
        raise PreconditionError("the fiber is not CM at the given bound")
    D = _schwarz_fn(fiber)
    member = in_cyclotomic3(D, DEFAULT_MAX_HEIGHT, ctx)
    if not member.member:
        raise PreconditionError("the Schwarz value is not recognised in Q(zeta3); not the Gamma(1/3) regime")

    def entry(k):
        def f(c: PrecisionCtx):
            return _eta1_periods(fiber.z_mp(c), c)[k]

        return f

    def const(c: PrecisionCtx):
        g = gamma_third_constant(c)
        with c.work():
            return g * mpmath.pi

    t1 = sim_test(entry(0), const, max_deg, max_height, ctx)
    t2 = sim_test(entry(1), const, max_deg, max_height, ctx)
    y1, y2 = entry(0)(ctx), entry(1)(ctx)
    return FootbalReport(fiber, member, y1, y2, t1, t2, ctx.bits, {"max_deg": max_deg, "max_height": max_height})
