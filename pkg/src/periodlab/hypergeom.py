"""Gauss hypergeometric machinery.

Conventions used throughout:

* E(x) = exp(2 pi i x).
* The fundamental matrix is the period matrix of the forms
  eta_1 = phi dx/x and eta_2 = x/(x-1) eta_1 over the Pochhammer cycles
  [0, z] and [1, z], where phi = x^a (1-x)^(-b) (z-x)^(c-a-1).  It solves

      Y' = ( [[c-1, -b], [0, 0]] / z + [[0, 0], [a, c-a-b-1]] / (z-1) ) Y.

* Monodromy matrices act on the right: Y(continued around a loop) = Y M.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from .errors import CPole, DegenerateParameters, DivergentAtOne, IntegerExponent, OutOfDisk
from .exact_algebra import Poly, RatFuncMatrix, RationalFunction
from .numerics import PrecisionCtx, beta, expi2pi, gamma, pow_principal, rgamma, to_mp, to_mpc
from .ode_engine import CPath, FirstOrderSystem, ScalarODE, continue_solution, loop_monodromy

SERIES_RADIUS = Fraction(15, 16)


@dataclass(frozen=True)
class HypergeomParams:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def parse(cls, a: str, b: str, c: str) -> "HypergeomParams":
        return cls(Fraction(a), Fraction(b), Fraction(c))

    @property
    def nu0(self) -> Fraction:
        return self.c - 1

    @property
    def nu1(self) -> Fraction:
        return self.c - self.a - self.b

    @property
    def nuinf(self) -> Fraction:
        return self.a - self.b

    def angular(self):
        return (self.nu0, self.nu1, self.nuinf)

    def primed(self) -> "HypergeomParams":
        """(a', b', c') = (a-c+1, b-c+1, 2-c)."""
        return HypergeomParams(self.a - self.c + 1, self.b - self.c + 1, 2 - self.c)

    def swapped(self) -> "HypergeomParams":
        return HypergeomParams(self.b, self.a, self.c)

    def shifted(self, k: int = 1) -> "HypergeomParams":
        return HypergeomParams(self.a + k, self.b + k, self.c + k)

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def _nonpos_int(x: Fraction) -> bool:
    return x.denominator == 1 and x <= 0


def _is_exact_rational(z) -> bool:
    return isinstance(z, (int, Fraction))


# --------------------------------------------------------------------------
# series


def _f21_binary_splitting(p: HypergeomParams, z: Fraction, bits: int):
    """Exact partial sum via binary splitting, converted at the end."""
    a, b, c = p.a, p.b, p.c
    # term ratio (a+n)(b+n) z / ((c+n)(n+1)) written over integers
    da, db, dc = a.denominator, b.denominator, c.denominator
    na, nb, nc = a.numerator, b.numerator, c.numerator
    zn, zd = z.numerator, z.denominator
    absz = abs(z)
    if absz == 0:
        return mpmath.mpf(1)
    # number of terms: |z|^N < 2^-(bits+20), padded for polynomial growth
    import math

    N = int((bits + 40) * math.log(2) / -math.log(float(absz))) + 20
    # terms vanish identically when a or b is a nonpositive integer
    for x in (a, b):
        if _nonpos_int(x):
            N = min(N, int(-x) + 1)

    def P(n):
        return (na + n * da) * (nb + n * db) * zn * dc

    def Q(n):
        return (nc + n * dc) * (n + 1) * da * db * zd

    def split(lo, hi):
        if hi - lo == 1:
            pn, qn = P(lo), Q(lo)
            return pn, qn, pn
        mid = (lo + hi) // 2
        p1, q1, t1 = split(lo, mid)
        p2, q2, t2 = split(mid, hi)
        return p1 * p2, q1 * q2, t1 * q2 + p1 * t2

    if N <= 0:
        return mpmath.mpf(1)
    _, Qn, Tn = split(0, N)
    # sum_{n>=1} prod_{k<n} P(k)/Q(k) = T / Q
    with mpmath.workprec(bits + 20):
        return 1 + mpmath.mpf(Tn) / mpmath.mpf(Qn)


def _f21_direct(p: HypergeomParams, z, bits: int):
    with mpmath.workprec(bits + 20):
        a, b, c = to_mp(p.a), to_mp(p.b), to_mp(p.c)
        z = to_mpc(z)
        s = mpmath.mpc(1)
        term = mpmath.mpc(1)
        eps = mpmath.ldexp(1, -bits - 10)
        az = abs(z)
        n = 0
        while True:
            term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            s += term
            n += 1
            if term == 0:
                break
            # tail bound with the current term-ratio bound
            rho = az * (abs(a) + n) * (abs(b) + n) / ((n + 1) * abs(c + n))
            rho = max(rho, az)
            if rho < 1 and n > 2 and abs(term) * rho / (1 - rho) < eps * abs(s):
                break
            if n > 200 * bits:
                raise OutOfDisk("series did not converge")
        return s


def f21(params: HypergeomParams, z, ctx: PrecisionCtx):
    """Power series of F(a,b;c;z) inside the disk |z| < 15/16."""
    if _nonpos_int(params.c):
        raise CPole(f"c = {params.c} is a nonpositive integer")
    with ctx.work():
        zz = to_mpc(z)
        if abs(zz) >= to_mp(SERIES_RADIUS):
            raise OutOfDisk(f"|z| = {mpmath.nstr(abs(zz), 8)} is outside the series disk")
    if _is_exact_rational(z):
        v = _f21_binary_splitting(params, Fraction(z), ctx.bits)
    else:
        v = _f21_direct(params, z, ctx.bits)
    with ctx.work():
        return mpmath.mpc(v) * 1


def gauss_ode(params: HypergeomParams) -> ScalarODE:
    """z(1-z) y'' + (c - (a+b+1) z) y' - a b y = 0."""
    a, b, c = params.a, params.b, params.c
    return ScalarODE.normalized([Poly([-a * b]), Poly([c, -(a + b + 1)]), Poly([0, 1, -1])])


def gauss_system(params: HypergeomParams, var: str = "z") -> FirstOrderSystem:
    a, b, c = params.a, params.b, params.c
    z = Poly([0, 1])
    zm1 = Poly([-1, 1])
    A = RatFuncMatrix(
        [
            [RationalFunction(Poly([c - 1]), z), RationalFunction(Poly([-b]), z)],
            [RationalFunction(Poly([a]), zm1), RationalFunction(Poly([c - a - b - 1]), zm1)],
        ]
    )
    return FirstOrderSystem(A, var)


def hyp2f1(params: HypergeomParams, z, ctx: PrecisionCtx, path: Optional[CPath] = None, side: int = 0):
    """Principal-branch F(a,b;c;z) anywhere off [1, oo).

    Small arguments use the series.  Larger ones continue (F, F') with the
    Gauss equation from a point where the series converges fast, along the
    ray towards z unless an explicit path (starting inside the disk) is given.
    On the cut (1, oo) pass ``side=-1`` (or +1) for the boundary value from
    below (above); it is taken from mpmath's own 2F1, whose cut convention is
    the limit from below, and conjugated for the upper side.
    """
    if _nonpos_int(params.c):
        raise CPole(f"c = {params.c} is a nonpositive integer")
    with ctx.work():
        zz = to_mpc(z)
        if path is None and abs(zz) <= mpmath.mpf("0.75"):
            return f21(params, z, ctx)
        if path is None:
            if zz.imag == 0 and zz.real >= 1:
                if side == 0 or zz.real == 1:
                    raise DegenerateParameters("z on the branch cut [1, oo) needs an explicit path or a side")
                v = mpmath.mpc(mpmath.hyp2f1(to_mp(params.a), to_mp(params.b), to_mp(params.c), zz.real))
                return v if side < 0 else mpmath.conj(v)
            start = zz / abs(zz) / 2
            verts = (start, zz)
        else:
            verts = tuple(path.vertices)
            start = verts[0]
        a, b, c = to_mp(params.a), to_mp(params.b), to_mp(params.c)
    y0 = f21(params, start, ctx)
    y1 = f21(params.shifted(1), start, ctx)
    with ctx.work():
        dy = to_mp(params.a * params.b / params.c) * y1
    out = continue_solution(gauss_ode(params), [y0, dy], CPath(verts), ctx)
    with ctx.work():
        return out[0, 0] * 1


def hyp2f1_with_derivative(params: HypergeomParams, z, ctx: PrecisionCtx):
    """(F, F') at z with the same branch rules as hyp2f1."""
    with ctx.work():
        zz = to_mpc(z)
    if abs(zz) <= 0.75:
        f = f21(params, z, ctx)
        g = f21(params.shifted(1), z, ctx)
        with ctx.work():
            return f, to_mp(params.a * params.b / params.c) * g
    with ctx.work():
        start = zz / abs(zz) / 2
    y0 = f21(params, start, ctx)
    y1 = f21(params.shifted(1), start, ctx)
    with ctx.work():
        dy = to_mp(params.a * params.b / params.c) * y1
    out = continue_solution(gauss_ode(params), [y0, dy], CPath((start, zz)), ctx)
    with ctx.work():
        return out[0, 0] * 1, out[1, 0] * 1


def gauss_value_at_one(params: HypergeomParams, ctx: PrecisionCtx):
    """Gauss summation Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b))."""
    a, b, c = params.a, params.b, params.c
    if c - a - b <= 0:
        raise DivergentAtOne(f"c-a-b = {c - a - b} <= 0")
    if _nonpos_int(c):
        raise CPole(f"c = {c} is a nonpositive integer")
    with ctx.work():
        return mpmath.mpc(gamma(c, ctx) * gamma(c - a - b, ctx) * rgamma(c - a, ctx) * rgamma(c - b, ctx))


def pochhammer_factor(alpha, mu, ctx: PrecisionCtx):
    """(1 - E(alpha)) (1 - E(mu)) relating a commutator loop to the open segment."""
    alpha, mu = Fraction(alpha), Fraction(mu)
    if alpha.denominator == 1 or mu.denominator == 1:
        raise IntegerExponent("Pochhammer factor needs non-integer exponents")
    with ctx.work():
        return (1 - expi2pi(alpha)) * (1 - expi2pi(mu))


# --------------------------------------------------------------------------
# fundamental matrix


@dataclass(frozen=True)
class FundamentalMatrix:
    params: HypergeomParams
    z: object
    entries: object  # 2x2 mpmath matrix
    representation: str

    def column(self, j: int):
        return [self.entries[0, j], self.entries[1, j]]

    def det(self):
        return self.entries[0, 0] * self.entries[1, 1] - self.entries[0, 1] * self.entries[1, 0]


def _cut_side(z) -> int:
    """Real z < 0 is read as z + i0, which puts w = 1 - z on the lower side of its cut."""
    zz = to_mpc(z)
    return -1 if zz.imag == 0 and zz.real < 0 else 0


def _col_at_zero(p: HypergeomParams, z, ctx: PrecisionCtx):
    """Column for the cycle [0, z], without the constant C11."""
    a, b, c = p.a, p.b, p.c
    if _nonpos_int(a) or _nonpos_int(c - a):
        raise DegenerateParameters("B(a, c-a) is infinite")
    F, _ = hyp2f1_with_derivative(p, z, ctx)
    G = hyp2f1(p.shifted(1), z, ctx)
    with ctx.work():
        zz = to_mpc(z)
        pref = beta(a, c - a, ctx) * pow_principal(zz, c - 1, ctx)
        return [pref * F, -pref * to_mp(a / c) * zz * G]


def _col_at_one(p: HypergeomParams, z, ctx: PrecisionCtx):
    """Column for the cycle [1, z], without the constant C22.

    At c = a+b the second entry is the limit of (c-a-b) F(-a,-b;c-a-b;w)/b,
    namely a w F(1-a,1-b;2;w).
    """
    a, b, c = p.a, p.b, p.c
    s = c - a - b
    if _nonpos_int(1 - b) or _nonpos_int(c - a):
        raise DegenerateParameters("B(1-b, c-a) is infinite")
    if s.denominator == 1 and s < 0:
        raise DegenerateParameters("c-a-b is a negative integer")
    with ctx.work():
        w = 1 - to_mpc(z)
        side = _cut_side(z)
    F1 = hyp2f1(HypergeomParams(1 - a, 1 - b, 1 + s), w, ctx, side=side)
    if s == 0:
        F2 = hyp2f1(HypergeomParams(1 - a, 1 - b, 2), w, ctx, side=side)
    else:
        F2 = hyp2f1(HypergeomParams(-a, -b, s), w, ctx, side=side)
    with ctx.work():
        pref = -mpmath.expjpi(-to_mp(1 + a - c)) * beta(1 - b, c - a, ctx) * pow_principal(w, s - 1, ctx)
        r1 = w * F1
        r2 = to_mp(a) * w * F2 if s == 0 else to_mp(s / b) * F2
        return [pref * r1, pref * r2]


def _col_at_infinity(p: HypergeomParams, z, ctx: PrecisionCtx):
    """Column for the loop pair (0, infinity) in the closed form valid for |z| > 1.

    Off that region the column is obtained by continuation inside the half
    plane containing z; real z in (0, 1) are reached from above.
    """
    a, b, c = p.a, p.b, p.c
    if _nonpos_int(a) or _nonpos_int(1 - b):
        raise DegenerateParameters("B(a, 1-b) is infinite")
    if _nonpos_int(a - b + 1):
        raise DegenerateParameters("a-b+1 is a nonpositive integer")

    def closed(zz):
        with ctx.work():
            u = 1 / zz
        q1 = HypergeomParams(a - c + 1, a, a - b + 1)
        q2 = HypergeomParams(a - c + 1, a + 1, a - b + 1)
        F1 = hyp2f1(q1, u, ctx)
        F2 = hyp2f1(q2, u, ctx)
        with ctx.work():
            pref = (1 - expi2pi(a)) * (1 - expi2pi(b)) * beta(a, 1 - b, ctx) * pow_principal(zz, c - a - 1, ctx)
            return [pref * F1, pref * to_mp(a / b) * F2]

    with ctx.work():
        zz = to_mpc(z)
        direct = abs(zz) >= mpmath.mpf(4) / 3
    if direct:
        return closed(zz)
    with ctx.work():
        up = zz.imag >= 0
        anchor = mpmath.mpc(zz.real, (2 + abs(zz.imag)) * (1 if up else -1))
    col = closed(anchor)
    out = continue_solution(gauss_system(p), col, CPath((anchor, zz)), ctx)
    with ctx.work():
        return [out[0, 0] * 1, out[1, 0] * 1]


def constant_matrix(params: HypergeomParams, ctx: PrecisionCtx):
    """Diagonal C = diag((1-E(a))(1-E(c-a-1)), (1-E(-b))(1-E(c-a-1)))."""
    a, b, c = params.a, params.b, params.c
    with ctx.work():
        return (
            (1 - expi2pi(a)) * (1 - expi2pi(c - a - 1)),
            (1 - expi2pi(-b)) * (1 - expi2pi(c - a - 1)),
        )


def fundamental_matrix(params: HypergeomParams, z, ctx: PrecisionCtx, representation: str = "akh") -> FundamentalMatrix:
    """Closed-form period matrix of (eta_1, eta_2) at z.

    ``akh``: columns for the cycles [0,z] and [1,z] (the second one taken as
    a parameter limit when c = a+b).  ``ukh``: first column as before, second
    column the solution attached to the point at infinity.  Real z < 0 is
    read as z + i0 (continued from (0, 1) through the upper half plane).
    """
    if representation not in ("akh", "ukh"):
        raise ValueError("representation must be 'akh' or 'ukh'")
    a, b, c = params.a, params.b, params.c
    if _nonpos_int(c):
        raise DegenerateParameters("c is a nonpositive integer")
    with ctx.work():
        zz = to_mpc(z)
        if zz == 0 or zz == 1:
            raise DegenerateParameters("z must avoid 0 and 1")
    c11, c22 = constant_matrix(params, ctx)
    col1 = _col_at_zero(params, z, ctx)
    if representation == "akh":
        col2 = _col_at_one(params, z, ctx)
        with ctx.work():
            col2 = [c22 * x for x in col2]
    else:
        col2 = _col_at_infinity(params, z, ctx)
    with ctx.work():
        M = mpmath.matrix(2, 2)
        M[0, 0], M[1, 0] = c11 * col1[0], c11 * col1[1]
        M[0, 1], M[1, 1] = col2[0], col2[1]
    return FundamentalMatrix(params, z, M, representation)


def schwarz_map(params: HypergeomParams, z, ctx: PrecisionCtx):
    """The Schwarz quotient in its printed closed form."""
    a, b, c = params.a, params.b, params.c
    if _nonpos_int(c - a - b + 1):
        raise DegenerateParameters("c-a-b+1 is a nonpositive integer")
    with ctx.work():
        zz = to_mpc(z)
        if zz == 0 or zz == 1:
            raise DegenerateParameters("z must avoid 0 and 1")
        w = 1 - Fraction(z) if _is_exact_rational(z) else 1 - zz
    Fz = hyp2f1(params, z, ctx)
    side = _cut_side(zz)
    Fw = hyp2f1(HypergeomParams(1 - a, 1 - b, c - a - b + 1), w, ctx, side=side)
    with ctx.work():
        pref = (1 - expi2pi(a)) / (-mpmath.expjpi(to_mp(1 + a - c)) * (1 - expi2pi(-b)))
        ratio_b = beta(a, c - a, ctx) / beta(1 - b, c - a, ctx)
        return pref * ratio_b * pow_principal(zz, c - 1, ctx) * Fz / Fw


# --------------------------------------------------------------------------
# monodromy


@dataclass(frozen=True)
class MonodromyTriple:
    A0: object
    A1: object
    Ainf: object


def monodromy_closed_form(params: HypergeomParams, ctx: PrecisionCtx) -> MonodromyTriple:
    """Local monodromies of the [0,z], [1,z] period basis.

    Positive loops based near the segment (0, 1), acting on the right.
    """
    a, b, c = params.a, params.b, params.c
    with ctx.work():
        A0 = mpmath.matrix([[expi2pi(c), expi2pi(c - a) * (expi2pi(-b) - 1)], [0, 1]])
        A1 = mpmath.matrix([[1, 0], [expi2pi(a) - 1, expi2pi(c - a - b)]])
        return MonodromyTriple(A0, A1, A0 * A1)


def printed_monodromy(params: HypergeomParams, ctx: PrecisionCtx) -> MonodromyTriple:
    """The monodromy formulas exactly as they appear in print.

    Kept for regression: they do not describe the loops of the period basis
    (their product fails the local exponent check at infinity).
    """
    a, b, c = params.a, params.b, params.c
    with ctx.work():
        A0 = mpmath.matrix([[expi2pi(c), expi2pi(-b) - 1], [0, 1]])
        A1 = mpmath.matrix([[1, 0], [expi2pi(c - a) * (expi2pi(-a) - 1), expi2pi(c - a - b)]])
        return MonodromyTriple(A0, A1, A0 * A1)


def conjugate(M, D, ctx: PrecisionCtx):
    """D^{-1} M D."""
    with ctx.work():
        return mpmath.inverse(D) * M * D


# --------------------------------------------------------------------------
# determinant relation


@dataclass(frozen=True)
class DetRelationReport:
    params: HypergeomParams
    samples: tuple
    normalized_values: tuple
    max_deviation: object
    constant: object
    reference: object
    ratio: object
    ratio_modulus: object
    representation: str


def det_relation_check(params: HypergeomParams, z_samples: Sequence, ctx: PrecisionCtx, representation: str = "akh") -> DetRelationReport:
    """det Y(z) |z|^(1-c) |1-z|^(1+a+b-c) should not depend on z.

    The ratio of that constant to pi B(a,c-a)/B(b,c-b) is reported as a
    complex number and as a modulus; the phase is a root of unity set by the
    branch conventions, the modulus is branch-free.
    """
    a, b, c = params.a, params.b, params.c
    vals = []
    for z in z_samples:
        zf = Fraction(z) if not isinstance(z, float) else Fraction(str(z))
        if not (Fraction(1, 20) <= zf <= Fraction(19, 20)):
            raise DegenerateParameters("samples must lie in [0.05, 0.95]")
        Y = fundamental_matrix(params, zf, ctx, representation)
        with ctx.work():
            zz = to_mp(zf)
            norm = mpmath.power(zz, to_mp(1 - c)) * mpmath.power(1 - zz, to_mp(1 + a + b - c))
            vals.append(Y.det() * norm)
    with ctx.work():
        dev = max((abs(x - y) for x in vals for y in vals), default=mpmath.mpf(0))
        const = vals[0]
        ref = mpmath.pi * beta(a, c - a, ctx) / beta(b, c - b, ctx)
        ratio = const / ref
        return DetRelationReport(params, tuple(z_samples), tuple(vals), dev, const, ref, ratio, abs(ratio), representation)


# --------------------------------------------------------------------------
# numeric monodromy of the period basis


def numeric_monodromy(params: HypergeomParams, around, ctx: PrecisionCtx, base=Fraction(1, 2),
                      representation: str = "akh", orientation: int = 1):
    """Loop monodromy of the closed-form period basis, by Taylor continuation.

    Returns M with (basis continued along the loop) = basis . M.
    """
    Y = fundamental_matrix(params, base, ctx, representation)
    res = loop_monodromy(gauss_system(params), base, around, ctx, basis=Y.entries, orientation=orientation)
    return res.matrix
