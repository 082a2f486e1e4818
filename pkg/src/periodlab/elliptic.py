"""The elliptic family y^2 = x^3 - 3x + 2 - (27/4) t^2, its j-invariant, periods and CM test.

z = (27/16) t^2 is the hypergeometric coordinate; in it the family reads
y^2 = x^3 - 3x + 2 - 4z and j = -432 / (z (z - 1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import mpmath

from .algebraicity import integer_relation
from .errors import Inconclusive, PreconditionError, QuadratureNonconvergence, SingularCurve, SingularFiber
from .exact_algebra import Poly, QuadraticNumber, RationalFunction
from .numerics import PrecisionCtx, certified_digits, to_mp, to_mpc

Exact = Union[Fraction, QuadraticNumber]


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticNumber))


def _exact(x):
    if isinstance(x, QuadraticNumber):
        return x if not x.is_rational() else x.a
    return Fraction(x)


def _num(x, ctx: PrecisionCtx):
    with ctx.work():
        if isinstance(x, QuadraticNumber):
            return mpmath.mpc(x.to_mp())
        return to_mpc(x)


@dataclass(frozen=True)
class EllipticCurveModel:
    """kind "weierstrass": y^2 = x^3 + p x + q, coefficients (p, q);
    kind "quartic": y^2 = x^4 + u x^2 + 1, coefficients (u,)."""

    kind: str
    coefficients: Tuple

    def __post_init__(self):
        if self.kind == "weierstrass":
            p, q = self.coefficients
            disc = 4 * p**3 + 27 * q**2
        elif self.kind == "quartic":
            (u,) = self.coefficients
            disc = u * u - 4
        else:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if _is_exact(disc):
            zero = disc == 0
        else:
            zero = abs(mpmath.mpmathify(disc)) == 0
        if zero:
            raise SingularCurve(f"singular curve {self}")

    @property
    def p(self):
        return self.coefficients[0]

    @property
    def q(self):
        return self.coefficients[1]

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coefficients)

    def __str__(self) -> str:
        if self.kind == "weierstrass":
            return f"y^2 = x^3 + ({self.p})*x + ({self.q})"
        return f"y^2 = x^4 + ({self.coefficients[0]})*x^2 + 1"


def curve_from_z(z) -> EllipticCurveModel:
    """y^2 = x^3 - 3x + 2 - 4z."""
    if _is_exact(z):
        z = _exact(z)
        if z == 0 or z == 1:
            raise SingularFiber(f"fiber over z={z} is singular")
    return EllipticCurveModel("weierstrass", (Fraction(-3), 2 - 4 * z))


def curve_from_t(t) -> Tuple[EllipticCurveModel, object]:
    """The curve over t and its z = (27/16) t^2."""
    if _is_exact(t):
        t = _exact(t)
        t2 = t * t
        if t2 == 0 or t2 == Fraction(16, 27):
            raise SingularFiber(f"fiber over t={t} is singular (t^2 in {{0, 16/27}})")
    else:
        t2 = t * t
    z = Fraction(27, 16) * t2
    return EllipticCurveModel("weierstrass", (Fraction(-3), 2 - Fraction(27, 4) * t2)), z


@dataclass(frozen=True)
class JRoot:
    z: Exact
    other: Exact
    choice: str


def z_from_j(j) -> JRoot:
    """Solve -432/(z(z-1)) = j.

    Picks the root in (0, 1) when there is one, else the root of smallest |z|.
    """
    j = Fraction(j)
    if j == 0:
        raise PreconditionError("j = 0 is not attained by -432/(z(z-1))")
    disc = 1 - Fraction(1728) / j
    if disc < 0:
        raise PreconditionError(f"j={j} gives complex z; only real quadratic z is supported")
    r = QuadraticNumber.sqrt(disc)
    half = Fraction(1, 2)
    r1 = (QuadraticNumber(half) - r * half)
    r2 = (QuadraticNumber(half) + r * half)
    v1, v2 = float(r1.to_mp()), float(r2.to_mp())
    if 0 < v1 < 1:
        return JRoot(_exact(r1), _exact(r2), "root in (0,1)")
    if 0 < v2 < 1:
        return JRoot(_exact(r2), _exact(r1), "root in (0,1)")
    if abs(v1) <= abs(v2):
        return JRoot(_exact(r1), _exact(r2), "no root in (0,1); smallest |z|")
    return JRoot(_exact(r2), _exact(r1), "no root in (0,1); smallest |z|")


def j_invariant(curve: EllipticCurveModel, ctx: Optional[PrecisionCtx] = None):
    """Exact for exact coefficients, otherwise numeric at ctx."""

    def formula(c):
        if curve.kind == "weierstrass":
            p, q = c
            d = 4 * p**3 + 27 * q**2
            return 1728 * 4 * p**3 / d
        (u,) = c
        inv_i = 12 + u * u
        inv_j = 72 * u - 2 * u**3
        return 6912 * inv_i**3 / (4 * inv_i**3 - inv_j**2)

    if curve.is_exact():
        return _exact(formula(tuple(_exact(c) for c in curve.coefficients)))
    if ctx is None:
        raise ValueError("numeric curve needs a precision context")
    with ctx.work():
        return formula(tuple(_num(c, ctx) for c in curve.coefficients))


def j_of_z_rational_function() -> RationalFunction:
    """j(curve_from_z(z)) as an exact rational function of z."""
    p = Poly.const(-3)
    q = Poly([2, -4])
    num = p**3 * 1728 * 4
    den = p**3 * 4 + q * q * 27
    return RationalFunction(num, den)


# --------------------------------------------------------------------------
# periods


@dataclass(frozen=True)
class PeriodLattice:
    omega1: object
    omega2: object
    method: str

    @property
    def tau(self):
        return self.omega1 / self.omega2


def _cubic_roots(curve: EllipticCurveModel, ctx: PrecisionCtx) -> List:
    if curve.kind != "weierstrass":
        raise ValueError("periods are implemented for the Weierstrass kind")
    p, q = (_num(c, ctx) for c in curve.coefficients)
    with ctx.work():
        roots = mpmath.polyroots([1, 0, p, q], maxsteps=100 + 2 * ctx.bits, extraprec=ctx.bits + 32)
        return [mpmath.mpc(r) for r in roots]


def _normalize(w1, w2):
    """Order the pair so that Im(w1/w2) > 0."""
    if (w1 / w2).imag < 0:
        w1 = -w1
    return w1, w2


def _all_real(roots, ctx: PrecisionCtx) -> bool:
    with ctx.work():
        scale = max(abs(r) for r in roots) + 1
        tol = mpmath.ldexp(scale, -ctx.bits // 2)
        return all(abs(r.imag) < tol for r in roots)


def _agm_periods(roots, ctx: PrecisionCtx) -> PeriodLattice:
    with ctx.work():
        e1, e2, e3 = sorted((r.real for r in roots), reverse=True)
        w_real = 2 * mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
        w_imag = 2j * mpmath.pi / mpmath.agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e2 - e3))
        w1, w2 = _normalize(mpmath.mpc(w_imag), mpmath.mpc(w_real))
        return PeriodLattice(w1, w2, "agm")


def _segment_period(ea, eb, ec, ctx: PrecisionCtx, degree: int):
    """2 * integral of dx/y from ea to eb, y^2 = (x-ea)(x-eb)(x-ec).

    With x = ea + (eb-ea) sin^2(theta) the endpoint singularities disappear and
    the integrand 2/sqrt(-(x-ec)) is smooth on [0, pi/2].  The square root is
    taken as sqrt(-(ea-ec)) * sqrt((x-ec)/(ea-ec)); the second ratio runs along
    a segment starting at 1 that avoids the negative axis whenever ec is off the
    line through ea and eb, so the branch stays continuous.
    """
    with ctx.work():
        w = (eb - ec) / (ea - ec)
        if abs(w.imag) < mpmath.ldexp(1, -ctx.bits // 2) and w.real <= 0:
            raise QuadratureNonconvergence("third root lies on the integration segment")
        root0 = mpmath.sqrt(-(ea - ec))

        def f(th):
            s = mpmath.sin(th) ** 2
            return 2 / (root0 * mpmath.sqrt(1 + s * (w - 1)))

        val, err = mpmath.quad(f, [0, mpmath.pi / 2], method="tanh-sinh", error=True, maxdegree=degree)
        return 2 * val, err


def quadrature_periods(curve: EllipticCurveModel, ctx: PrecisionCtx, degree: Optional[int] = None) -> PeriodLattice:
    roots = _cubic_roots(curve, ctx)
    with ctx.work():
        # pick a base root so that neither other root lies between the remaining two
        best = None
        for i in range(3):
            ea = roots[i]
            eb, ec = [roots[k] for k in range(3) if k != i]
            w = (eb - ec) / (ea - ec)
            w2 = (ec - eb) / (ea - eb)
            margin = min(mpmath.pi - abs(mpmath.arg(w)), mpmath.pi - abs(mpmath.arg(w2)))
            if best is None or margin > best[0]:
                best = (margin, ea, eb, ec)
        _, ea, eb, ec = best
    deg = degree or max(6, int(mpmath.log(ctx.bits, 2)) + 3)
    w1, err1 = _segment_period(ea, eb, ec, ctx, deg)
    w2, err2 = _segment_period(ea, ec, eb, ctx, deg)
    with ctx.work():
        tol = mpmath.ldexp(max(abs(w1), abs(w2)), -ctx.bits // 2)
        if err1 > tol or err2 > tol:
            raise QuadratureNonconvergence(f"quadrature error estimates {mpmath.nstr(err1, 3)}, {mpmath.nstr(err2, 3)}")
        w1, w2 = _normalize(w1, w2)
        return PeriodLattice(w1, w2, "quadrature")


def periods(curve: EllipticCurveModel, ctx: PrecisionCtx, method: str = "auto") -> PeriodLattice:
    """A basis of the period lattice of dx/y, ordered so Im(omega1/omega2) > 0."""
    if method not in ("auto", "agm", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "quadrature":
        return quadrature_periods(curve, ctx)
    roots = _cubic_roots(curve, ctx)
    if _all_real(roots, ctx):
        return _agm_periods(roots, ctx)
    if method == "agm":
        raise PreconditionError("AGM path needs three real roots")
    return quadrature_periods(curve, ctx)


# --------------------------------------------------------------------------
# modular reduction


@dataclass(frozen=True)
class TauReduction:
    tau: object
    matrix: Tuple[Tuple[int, int], Tuple[int, int]]  # tau' = (a tau + b)/(c tau + d)
    word: Tuple[str, ...]


def tau_reduce(tau, ctx: Optional[PrecisionCtx] = None, max_iter: int = 10000) -> TauReduction:
    """Move tau into |Re tau| <= 1/2, |tau| >= 1 by translations and inversions."""
    ctx = ctx or PrecisionCtx(max(64, mpmath.mp.prec))
    with ctx.work():
        t = to_mpc(tau)
        if t.imag <= 0:
            raise PreconditionError("tau must lie in the upper half-plane")
        a, b, c, d = 1, 0, 0, 1
        word: List[str] = []
        slack = mpmath.ldexp(1, -ctx.bits // 2)
        for _ in range(max_iter):
            n = int(mpmath.nint(t.real))
            if n:
                t -= n
                a, b = a - n * c, b - n * d
                word.append(f"T^{-n}")
            if abs(t) < 1 - slack:
                t = -1 / t
                a, b, c, d = -c, -d, a, b
                word.append("S")
                continue
            break
        # boundary representatives: -1/2 <= Re < 1/2, and Re <= 0 on the unit arc
        if t.real > mpmath.mpf(1) / 2 - slack:
            t -= 1
            a, b = a - c, b - d
            word.append("T^-1")
        if abs(t) < 1 + slack and t.real > slack:
            t = -1 / t
            a, b, c, d = -c, -d, a, b
            word.append("S")
        return TauReduction(t, ((a, b), (c, d)), tuple(word))


def j_from_tau(tau, ctx: PrecisionCtx):
    """Klein's j normalized so j(i) = 1728."""
    with ctx.work():
        return 1728 * mpmath.kleinj(to_mpc(tau))


# --------------------------------------------------------------------------
# CM detection


@dataclass(frozen=True)
class CMDecision:
    is_cm: bool
    discriminant: Optional[int]
    relation: Optional[Tuple[int, int, int]]  # A tau^2 + B tau + C = 0
    confidence: int  # certified digits of tau
    tau: object = None
    residual: object = None
    residual_doubled: object = None
    max_coeff: int = 0

    def to_dict(self) -> dict:
        return {
            "is_cm": self.is_cm,
            "discriminant": self.discriminant,
            "relation": None if self.relation is None else list(self.relation),
            "tau": None if self.tau is None else mpmath.nstr(self.tau, max(5, self.confidence)),
            "certified_digits": self.confidence,
            "residual": None if self.residual is None else mpmath.nstr(self.residual, 5),
            "residual_doubled": None if self.residual_doubled is None else mpmath.nstr(self.residual_doubled, 5),
            "max_coeff": self.max_coeff,
        }


def reduced_tau(curve: EllipticCurveModel, ctx: PrecisionCtx):
    lat = periods(curve, ctx)
    with ctx.work():
        tau = lat.tau
    return tau_reduce(tau, ctx).tau


def cm_detect(curve: EllipticCurveModel, max_coeff: int, ctx: PrecisionCtx) -> CMDecision:
    """Look for A tau^2 + B tau + C = 0 with |A|,|B|,|C| <= max_coeff."""
    cache = {}

    def tau_at(c: PrecisionCtx):
        if c.bits not in cache:
            cache[c.bits] = reduced_tau(curve, c)
        return cache[c.bits]

    def vals(c: PrecisionCtx):
        t = tau_at(c)
        with c.work():
            return [t * t, t, mpmath.mpc(1)]

    rel = integer_relation(vals, max_coeff, ctx)
    hi = tau_at(ctx.doubled())
    with ctx.doubled().work():
        digits = min(ctx.digits, certified_digits(tau_at(ctx), hi))
    if rel is None:
        return CMDecision(False, None, None, digits, hi, max_coeff=max_coeff)
    if not rel.dual_certified:
        raise Inconclusive(f"relation {rel.coefficients} found at {ctx.bits} bits is refuted at {ctx.doubled().bits}")
    A, B, C = rel.coefficients
    if A == 0:
        return CMDecision(False, None, None, digits, hi, rel.residual, rel.residual_doubled, max_coeff)
    if A < 0:
        A, B, C = -A, -B, -C
    disc = B * B - 4 * A * C
    if disc >= 0:
        return CMDecision(False, None, None, digits, hi, rel.residual, rel.residual_doubled, max_coeff)
    return CMDecision(True, disc, (A, B, C), digits, hi, rel.residual, rel.residual_doubled, max_coeff)
