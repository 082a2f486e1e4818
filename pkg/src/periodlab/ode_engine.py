"""Scalar Picard-Fuchs operators, first-order Fuchsian systems and their numerics.

Exact side: cyclic-vector reduction of a system to a scalar equation, gauge
transforms, polynomial pullbacks and Frobenius indicial polynomials.

Numeric side: Taylor-series analytic continuation along polylines, loop
monodromy and an apparent-singularity test that combines both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import (
    Inconclusive,
    IrregularSingularity,
    NoRelationWithinCap,
    PathTooCloseToSingularity,
    SingularGauge,
    StepUnderflow,
)
from .exact_algebra import (
    Poly,
    RatFuncMatrix,
    RationalFunction,
    as_ratfunc,
    linear_dependency,
    poly_gcd,
    poly_lcm,
    poly_roots_numeric,
)
from .numerics import PrecisionCtx, to_mp, to_mpc


# --------------------------------------------------------------------------
# exact data types


@dataclass(frozen=True)
class ScalarODE:
    """p_0 y + p_1 y' + ... + p_m y^(m) = 0 with coprime integer coefficients."""

    coefficients: Tuple[Poly, ...]

    def __post_init__(self):
        cs = tuple(self.coefficients)
        while cs and cs[-1].is_zero():
            cs = cs[:-1]
        if len(cs) < 2:
            raise ValueError("an ODE needs a nonzero coefficient of order >= 1")
        object.__setattr__(self, "coefficients", cs)

    @classmethod
    def normalized(cls, coeffs: Sequence) -> "ScalarODE":
        """Scale rational-function coefficients to the integer-primitive form."""
        rfs = [as_ratfunc(c) for c in coeffs]
        den = reduce(poly_lcm, (r.den for r in rfs), Poly([1]))
        polys = [r.num * den.exact_div(r.den) for r in rfs]
        nz = [p for p in polys if not p.is_zero()]
        num_gcd = reduce(math.gcd, (c.numerator for p in nz for c in p.coeffs))
        den_lcm = reduce(math.lcm, (c.denominator for p in nz for c in p.coeffs))
        scale = Fraction(den_lcm, num_gcd)
        polys = [p.scale(scale) for p in polys]
        while polys and polys[-1].is_zero():
            polys.pop()
        if polys[-1].lc < 0:
            polys = [-p for p in polys]
        return cls(tuple(polys))

    @classmethod
    def parse(cls, texts: Sequence[str], var: str = "t") -> "ScalarODE":
        from .exact_algebra import parse_poly

        return cls.normalized([parse_poly(s, var) for s in texts])

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Poly:
        return self.coefficients[-1]

    def is_primitive(self) -> bool:
        ints = []
        for p in self.coefficients:
            for c in p.coeffs:
                if c.denominator != 1:
                    return False
                ints.append(c.numerator)
        return reduce(math.gcd, ints) == 1

    def reduced_order(self) -> "ScalarODE":
        """Equation for y' when the coefficient of y vanishes."""
        if not self.coefficients[0].is_zero():
            raise ValueError("coefficient of y is nonzero; order cannot be reduced")
        return ScalarODE.normalized(self.coefficients[1:])

    def companion(self, var: str = "t") -> "FirstOrderSystem":
        m = self.order
        pm = RationalFunction(self.leading)
        rows = []
        for i in range(m - 1):
            rows.append([1 if j == i + 1 else 0 for j in range(m)])
        rows.append([-RationalFunction(self.coefficients[j]) / pm for j in range(m)])
        return FirstOrderSystem(RatFuncMatrix(rows), var)

    def apply(self, derivs: Sequence, t) -> object:
        """Residual sum p_i(t) y^(i)(t) for numeric derivative values."""
        return sum(p.eval_mp(t) * d for p, d in zip(self.coefficients, derivs))

    def to_display_string(self, var: str = "t") -> str:
        """Compact display, highest derivative first, e.g. ``(27t^3-16t)y''+15ty=0``."""
        parts = []
        for i in range(self.order, -1, -1):
            p = self.coefficients[i]
            if p.is_zero():
                continue
            y = "y" + "'" * i
            nz = [c for c in p.coeffs if c != 0]
            if len(nz) == 1:
                txt = p.to_compact(var)
                if txt == "1":
                    txt = ""
                elif txt == "-1":
                    txt = "-"
                term = txt + y
            else:
                term = f"({p.to_compact(var)}){y}"
            if parts and not term.startswith("-"):
                term = "+" + term
            parts.append(term)
        return "".join(parts) + "=0"

    def __str__(self) -> str:
        return self.to_display_string()


@dataclass(frozen=True)
class FirstOrderSystem:
    """Y' = A(t) Y."""

    A: RatFuncMatrix
    var: str = "t"

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise ValueError("system matrix must be square")

    @property
    def dim(self) -> int:
        return self.A.rows

    def denominator(self) -> Poly:
        return self.A.common_denominator().monic()

    def singular_points(self, ctx: PrecisionCtx) -> List:
        return list(_singular_points(self, ctx.bits))


@lru_cache(maxsize=256)
def _singular_points(system: FirstOrderSystem, bits: int) -> Tuple:
    q = system.denominator()
    if q.degree < 1:
        return ()
    roots = poly_roots_numeric(q, PrecisionCtx(max(bits, 64)))
    uniq = []
    with mpmath.workprec(bits):
        tol = mpmath.ldexp(1, -bits // 2)
        for r in roots:
            if all(abs(r - u) > tol for u in uniq):
                uniq.append(r)
    return tuple(uniq)


# --------------------------------------------------------------------------
# cyclic vectors, gauge transforms, pullbacks


def system_to_scalar(
    system: FirstOrderSystem,
    seed: Union[int, Sequence],
    order_cap: Optional[int] = None,
) -> ScalarODE:
    """Minimal scalar ODE satisfied by the periods of a form in the system's frame.

    The frame convention is d/dt omega = A omega, so a form r.omega (r a row
    vector) has derivative (r' + r A).omega.  ``seed`` is either a basis index
    or an explicit row vector r_0.
    """
    n = system.dim
    if isinstance(seed, int):
        if not 0 <= seed < n:
            raise ValueError(f"seed index {seed} out of range")
        r = [as_ratfunc(1 if j == seed else 0) for j in range(n)]
    else:
        r = [as_ratfunc(x) for x in seed]
        if len(r) != n:
            raise ValueError("seed vector has the wrong dimension")
    cap = n if order_cap is None else order_cap
    if cap > n:
        raise ValueError("order cap cannot exceed the system dimension")
    vecs = [r]
    for _ in range(cap):
        cur = vecs[-1]
        nxt = [a.derivative() + b for a, b in zip(cur, system.A.apply_row(cur))]
        vecs.append(nxt)
        dep = linear_dependency(vecs)
        if dep is not None:
            return ScalarODE.normalized(dep)
    raise NoRelationWithinCap(f"no relation of order <= {cap}")


def gauge_transform(system: FirstOrderSystem, G: RatFuncMatrix) -> FirstOrderSystem:
    """System satisfied by G.Y: (G' + G A) G^{-1}."""
    try:
        Ginv = G.inverse()
    except ZeroDivisionError as exc:
        raise SingularGauge("gauge matrix is not invertible over Q(t)") from exc
    return FirstOrderSystem((G.derivative() + G * system.A) * Ginv, system.var)


def pullback(system: FirstOrderSystem, substitution: Poly, var: str = "t") -> FirstOrderSystem:
    """Substitute z = s(t): the new matrix is A(s(t)) s'(t)."""
    if substitution.degree < 1:
        raise ValueError("substitution must be nonconstant")
    return FirstOrderSystem(system.A.compose(substitution) * RationalFunction(substitution.derivative()), var)


# --------------------------------------------------------------------------
# indicial exponents


class _Ext:
    """Arithmetic in Q[t]/(g) for the Frobenius computation at roots of g."""

    def __init__(self, g: Poly):
        self.g = g.monic()

    def red(self, p: Poly) -> Poly:
        return p % self.g

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b) % self.g


@dataclass(frozen=True)
class IndicialData:
    point: object
    polynomial_coords: Tuple[Poly, ...]  # indicial polynomial in r, one per power of the root
    exponents: Tuple  # numeric values (one embedding of the root)
    rational_exponents: Tuple[Fraction, ...]


def _local_data(ode: ScalarODE, g: Poly):
    ext = _Ext(g)
    gp = g.derivative()
    orders, leads = [], []
    for p in ode.coefficients:
        if p.is_zero():
            orders.append(None)
            leads.append(None)
            continue
        k, u = 0, p
        while True:
            q, r = u.divmod(g)
            if not r.is_zero():
                break
            u, k = q, k + 1
        orders.append(k)
        leads.append(ext.mul(ext.red(u), ext.red(gp ** k)))
    return orders, leads


def _falling(i: int) -> Poly:
    p = Poly([1])
    for j in range(i):
        p = p * Poly([-j, 1])
    return p


def indicial_data(ode: ScalarODE, point) -> IndicialData:
    """Indicial polynomial and exponents at a finite root set or at infinity.

    ``point`` is a rational number, an irreducible factor (Poly) of the leading
    coefficient whose roots are treated together, or the string ``"inf"``.
    At infinity the exponents refer to the local parameter 1/t.
    """
    m = ode.order
    if point == "inf":
        shifts = []
        for i, p in enumerate(ode.coefficients):
            shifts.append(None if p.is_zero() else p.degree - i)
        delta = max(s for s in shifts if s is not None)
        if shifts[m] != delta:
            raise IrregularSingularity("indicial degree deficit at infinity")
        ind = Poly()
        for i, p in enumerate(ode.coefficients):
            if shifts[i] == delta:
                ind = ind + _falling(i).scale(p.lc)
        # y ~ t^rho = s^{-rho}
        ind_s = ind.compose(Poly([0, -1]))
        coords = (ind_s,)
        g = None
    else:
        g = point if isinstance(point, Poly) else Poly([-Fraction(point), 1])
        orders, leads = _local_data(ode, g)
        shifts = [None if k is None else k - i for i, k in enumerate(orders)]
        delta = min(s for s in shifts if s is not None)
        if shifts[m] != delta:
            raise IrregularSingularity(f"indicial degree deficit at {point}")
        d = g.degree
        coords_l = [Poly() for _ in range(d)]
        for i in range(m + 1):
            if shifts[i] != delta:
                continue
            lead = leads[i]
            fall = _falling(i)
            for k in range(d):
                ck = lead[k]
                if ck:
                    coords_l[k] = coords_l[k] + fall.scale(ck)
        coords = tuple(coords_l)
    nz = [c for c in coords if not c.is_zero()]
    common = reduce(poly_gcd, nz)
    rational = tuple(r for r in common.rational_roots()) if common.degree >= 1 else ()
    return IndicialData(point, coords, (), rational)


def indicial_exponents(ode: ScalarODE, point, ctx: Optional[PrecisionCtx] = None) -> List:
    """Roots of the indicial polynomial, with rational roots reported exactly.

    For an algebraic point given by its irreducible factor, numeric roots are
    reported for the first root of that factor (conjugate points have
    conjugate exponents; rational exponents are common to all).
    """
    ctx = ctx or PrecisionCtx(128)
    data = indicial_data(ode, point)
    with ctx.work():
        if point == "inf" or not isinstance(point, Poly) or point.degree == 1:
            poly = data.polynomial_coords[0]
        else:
            theta = poly_roots_numeric(point, ctx)[0]
            poly = None
        if poly is not None:
            ind = poly
            rats = list(ind.rational_roots())
            rest = ind
            for r in rats:
                while True:
                    q, rr = rest.divmod(Poly([-r, 1]))
                    if not rr.is_zero():
                        break
                    rest = q
            out: List = []
            for r in rats:
                mult = _multiplicity(ind, r)
                out.extend([r] * mult)
            if rest.degree >= 1:
                out.extend(poly_roots_numeric(rest, ctx))
            return out
        # numeric specialisation of the Q(theta)-coefficient polynomial
        deg = max(c.degree for c in data.polynomial_coords)
        coeffs = []
        for j in range(deg + 1):
            v = mpmath.mpc(0)
            for k, c in enumerate(data.polynomial_coords):
                v += to_mp(c[j]) * theta ** k
            coeffs.append(v)
        rats = list(data.rational_exponents)
        out = []
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=ctx.bits)
        tol = mpmath.ldexp(1, -ctx.bits // 3)
        for r in roots:
            exact = next((q for q in rats if abs(r - to_mp(q)) < tol), None)
            out.append(exact if exact is not None else mpmath.mpc(r))
        return out


def _multiplicity(p: Poly, r: Fraction) -> int:
    k = 0
    lin = Poly([-r, 1])
    while True:
        q, rem = p.divmod(lin)
        if not rem.is_zero():
            return k
        p, k = q, k + 1


# --------------------------------------------------------------------------
# numeric continuation


@dataclass(frozen=True)
class CPath:
    vertices: Tuple
    clearance: object = None

    @classmethod
    def parse(cls, text: str) -> "CPath":
        verts = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = [p.strip() for p in chunk.split(",")]
            re_ = mpmath.mpf(parts[0])
            im_ = mpmath.mpf(parts[1]) if len(parts) > 1 else mpmath.mpf(0)
            verts.append(mpmath.mpc(re_, im_))
        return cls(tuple(verts))

    def with_clearance(self, singular: Sequence) -> "CPath":
        verts = tuple(to_mpc(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if a == b:
                raise ValueError("consecutive path vertices must differ")
        clr = None
        for a, b in zip(verts, verts[1:]):
            for s in singular:
                d = _segment_distance(a, b, s)
                clr = d if clr is None else min(clr, d)
        return CPath(verts, clr if clr is not None else mpmath.inf)


def _segment_distance(a, b, p):
    ab = b - a
    L2 = abs(ab) ** 2
    u = ((p - a) * mpmath.conj(ab)).real / L2
    u = min(max(u, 0), 1)
    return abs(a + u * ab - p)


@lru_cache(maxsize=256)
def _poly_data(system: FirstOrderSystem):
    """Common denominator q and numerator matrix P = q A, both exact."""
    q = system.denominator()
    P = []
    for i in range(system.dim):
        row = []
        for j in range(system.dim):
            e = system.A[i, j]
            row.append(e.num * q.exact_div(e.den))
        P.append(row)
    return q, P


def _shift_coeffs(coeffs: List, t0) -> List:
    """Taylor coefficients of a polynomial at t0 (ascending input)."""
    c = list(coeffs)
    n = len(c)
    for k in range(n):
        for j in range(n - 2, k - 1, -1):
            c[j] += t0 * c[j + 1]
    return c


class _NumericSystem:
    def __init__(self, system: FirstOrderSystem):
        q, P = _poly_data(system)
        self.dim = system.dim
        self.q = [to_mp(c) for c in q.coeffs]
        maxdeg = max(p.degree for row in P for p in row)
        self.dP = max(maxdeg, 0)
        self.P = [[[to_mp(P[i][j][k]) for k in range(self.dP + 1)] for j in range(self.dim)] for i in range(self.dim)]

    def local(self, t0):
        qs = _shift_coeffs(self.q, t0)
        Ps = []
        shifted = [[_shift_coeffs(self.P[i][j], t0) for j in range(self.dim)] for i in range(self.dim)]
        for k in range(self.dP + 1):
            Ps.append([[shifted[i][j][k] for j in range(self.dim)] for i in range(self.dim)])
        return qs, Ps


def _taylor_step(ns: _NumericSystem, t0, Y0: List[List], h, bits: int) -> List[List]:
    qs, Ps = ns.local(t0)
    q0 = qs[0]
    if q0 == 0:
        raise PathTooCloseToSingularity(f"step center {t0} is singular")
    dim = ns.dim
    ncols = len(Y0[0])
    dq = len(qs) - 1
    dP = len(Ps) - 1
    Ys = [Y0]
    total = [[mpmath.mpc(x) for x in row] for row in Y0]
    scale = max((abs(x) for row in Y0 for x in row), default=mpmath.mpf(1)) or mpmath.mpf(1)
    tol = mpmath.ldexp(1, -bits - 16)
    hp = mpmath.mpc(1)
    small = 0
    nmax = 40 * bits + 200
    n = 0
    inv_q0 = 1 / q0
    while True:
        S = [[mpmath.mpc(0)] * ncols for _ in range(dim)]
        for j in range(min(n, dP) + 1):
            Pj = Ps[j]
            Yn = Ys[n - j]
            for i in range(dim):
                row = Pj[i]
                Si = S[i]
                for k in range(dim):
                    a = row[k]
                    if a:
                        Yk = Yn[k]
                        for c in range(ncols):
                            Si[c] += a * Yk[c]
        for j in range(1, min(n + 1, dq) + 1):
            qj = qs[j]
            if not qj:
                continue
            fac = qj * (n + 1 - j)
            Yn = Ys[n + 1 - j]
            for i in range(dim):
                Si = S[i]
                Yi = Yn[i]
                for c in range(ncols):
                    Si[c] -= fac * Yi[c]
        d = inv_q0 / (n + 1)
        Ynew = [[x * d for x in row] for row in S]
        Ys.append(Ynew)
        hp *= h
        mag = mpmath.mpf(0)
        for i in range(dim):
            for c in range(ncols):
                term = Ynew[i][c] * hp
                total[i][c] += term
                a = abs(term)
                if a > mag:
                    mag = a
        cur = max(abs(x) for row in total for x in row)
        if cur > scale:
            scale = cur
        n += 1
        if mag <= tol * scale:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        if n > nmax:
            raise StepUnderflow("Taylor series failed to converge within the term budget")
    return total


def _to_rows(initial, dim: int) -> List[List]:
    if isinstance(initial, mpmath.matrix):
        rows = [[mpmath.mpc(initial[i, j]) for j in range(initial.cols)] for i in range(initial.rows)]
    elif initial and isinstance(initial[0], (list, tuple)):
        rows = [[mpmath.mpc(to_mpc(x)) for x in r] for r in initial]
    else:
        rows = [[mpmath.mpc(to_mpc(x))] for x in initial]
    if len(rows) != dim:
        raise ValueError("initial data has the wrong dimension")
    return rows


def continue_solution(sys_or_ode, initial, path: CPath, ctx: PrecisionCtx):
    """Analytically continue solution data along a polyline.

    ``initial`` is a vector (length dim) or a dim x k matrix of solution values
    at the first vertex; for a ScalarODE it holds (y, y', ..., y^(m-1)).
    Returns an mpmath matrix of the continued values at the last vertex.
    """
    system = sys_or_ode.companion() if isinstance(sys_or_ode, ScalarODE) else sys_or_ode
    guard = 24
    bits = ctx.bits + guard
    with mpmath.workprec(bits):
        sing = _singular_points(system, bits)
        p = path.with_clearance(sing)
        floor = mpmath.ldexp(1, -ctx.bits // 4)
        if p.clearance <= floor:
            raise PathTooCloseToSingularity(f"path clearance {mpmath.nstr(p.clearance, 5)} too small")
        ns = _NumericSystem(system)
        Y = _to_rows(initial, system.dim)
        steps = 0
        for a, b in zip(p.vertices, p.vertices[1:]):
            cur = a
            while True:
                rem = b - cur
                L = abs(rem)
                if L == 0:
                    break
                R = min((abs(cur - s) for s in sing), default=mpmath.inf)
                hmax = R / 2
                if L <= hmax:
                    h = rem
                    nxt = b
                elif L < hmax * 3 / 2:
                    # avoid leaving a sliver that would underflow next step
                    h = rem / 2
                    nxt = cur + h
                else:
                    h = rem / L * hmax
                    nxt = cur + h
                if abs(h) < mpmath.ldexp(1, -ctx.bits // 3):
                    raise StepUnderflow("continuation step underflow")
                Y = _taylor_step(ns, cur, Y, h, bits)
                cur = nxt
                steps += 1
                if steps > 100000:
                    raise StepUnderflow("too many continuation steps")
        out = mpmath.matrix(len(Y), len(Y[0]))
        for i, row in enumerate(Y):
            for j, x in enumerate(row):
                out[i, j] = x
    with ctx.work():
        return out * 1


def taylor_derivative(system: FirstOrderSystem, t0, Y0, ctx: PrecisionCtx):
    """A(t0) Y0, the derivative of solution data."""
    with ctx.work():
        n = system.dim
        A = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                A[i, j] = system.A[i, j].eval_mp(mpmath.mpc(t0))
        Y = mpmath.matrix(_to_rows(Y0, n))
        return A * Y


# --------------------------------------------------------------------------
# monodromy


@dataclass(frozen=True)
class MonodromyResult:
    base: object
    around: object
    matrix: object  # mpmath matrix with basis o loop = basis . M
    path: CPath = field(repr=False, default=None)

    def is_identity(self, tol) -> bool:
        M = self.matrix
        return all(abs(M[i, j] - (1 if i == j else 0)) < tol for i in range(M.rows) for j in range(M.cols))


def square_loop(base, around, singular: Sequence, ctx: PrecisionCtx, orientation: int = 1) -> CPath:
    """Square loop around ``around`` starting at ``base``; counterclockwise unless orientation is -1."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be 1 or -1")
    with ctx.work():
        base, around = to_mpc(base), to_mpc(around)
        others = [s for s in singular if abs(s - around) > mpmath.ldexp(1, -ctx.bits // 2)]
        dist_other = min((abs(s - around) for s in others), default=mpmath.inf)
        side = min(mpmath.mpf("0.4") * abs(base - around), mpmath.mpf("0.4") * dist_other)
        u = (base - around) / abs(base - around)
        start = around + side * u / max(abs(u.real), abs(u.imag))
        ang0 = mpmath.arg(start - around)
        corners = []
        for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
            c = around + side * mpmath.mpc(sx, sy)
            ang = mpmath.arg(c - around)
            rel = (ang - ang0) % (2 * mpmath.pi)
            if rel == 0:
                rel = 2 * mpmath.pi
            corners.append((rel, c))
        corners.sort(key=lambda x: x[0])
        verts = [base]
        if abs(start - base) > 0:
            verts.append(start)
        verts.extend(c for _, c in corners)
        if abs(verts[-1] - start) > 0:
            verts.append(start)
        if abs(start - base) > 0:
            verts.append(base)
        if orientation == -1:
            verts.reverse()
        return CPath(tuple(verts))


def loop_monodromy(sys_or_ode, base, around, ctx: PrecisionCtx, basis=None, orientation: int = 1) -> MonodromyResult:
    """M with (continuation of Y along the loop) = Y * M, where Y(base) = basis (identity by default)."""
    system = sys_or_ode.companion() if isinstance(sys_or_ode, ScalarODE) else sys_or_ode
    sing = _singular_points(system, ctx.bits + 24)
    path = square_loop(base, around, sing, ctx, orientation)
    n = system.dim
    with ctx.work():
        ident = mpmath.eye(n)
    T = continue_solution(system, ident, path, ctx)
    with ctx.work():
        if basis is None:
            M = T
        else:
            B = mpmath.matrix(basis)
            M = mpmath.inverse(B) * T * B
    return MonodromyResult(base, around, M, path)


def residue_matrix(system: FirstOrderSystem, point, ctx: PrecisionCtx):
    with ctx.work():
        t0 = mpmath.mpc(point)
        n = system.dim
        R = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                e = system.A[i, j]
                num = e.num.eval_mp(t0)
                dd = e.den.derivative().eval_mp(t0)
                if abs(e.den.eval_mp(t0)) > mpmath.ldexp(1, -ctx.bits // 2):
                    R[i, j] = 0
                else:
                    R[i, j] = num / dd
        return R


@dataclass(frozen=True)
class ApparentVerdict:
    point: object
    verdict: str  # "apparent" or "true_singularity"
    exponents: Tuple
    exponents_ok: bool
    monodromy_ok: bool
    monodromy_deviation: object


def apparent_singularity_test(sys_or_ode, point, ctx: PrecisionCtx, base=None) -> ApparentVerdict:
    """Decide whether a root of the leading coefficient is an apparent singularity.

    ``point`` is a rational number or a numeric complex root; for an ODE an
    irreducible factor may also be given together with a numeric root as
    ``(factor, root)``.
    """
    factor = None
    if isinstance(point, tuple):
        factor, point = point
    if isinstance(sys_or_ode, ScalarODE):
        ode = sys_or_ode
        exps = indicial_exponents(ode, factor if factor is not None else point, ctx)
        system = ode.companion()
    else:
        system = sys_or_ode
        R = residue_matrix(system, point, ctx)
        with ctx.work():
            ev = mpmath.eig(R, left=False, right=False)
            exps = []
            for v in ev:
                r = mpmath.nint(v.real)
                exps.append(Fraction(int(r)) if abs(v - r) < mpmath.ldexp(1, -ctx.bits // 3) else v)
    exponents_ok = all(isinstance(e, Fraction) and e.denominator == 1 and e >= 0 for e in exps) and len(set(exps)) == len(exps)
    with ctx.work():
        p = to_mpc(point)
        if base is None:
            base = _default_base(system, p, ctx)
    res = loop_monodromy(system, base, p, ctx)
    with ctx.work():
        M = res.matrix
        dev = max(abs(M[i, j] - (1 if i == j else 0)) for i in range(M.rows) for j in range(M.cols))
        tol = mpmath.mpf(10) ** (-(ctx.digits - 10))
        mono_ok = dev < tol
    if mono_ok != exponents_ok:
        raise Inconclusive(
            f"exponent test ({exponents_ok}) and monodromy test ({mono_ok}) disagree at {point}"
        )
    return ApparentVerdict(point, "apparent" if mono_ok else "true_singularity", tuple(exps), exponents_ok, mono_ok, dev)


def _default_base(system: FirstOrderSystem, p, ctx: PrecisionCtx):
    """1/10 unless that is too close to the target or another singular point."""
    sing = _singular_points(system, ctx.bits + 24)
    cand = [mpmath.mpc("0.1"), p + abs(p) * mpmath.mpf("0.5") + mpmath.mpf("0.25"), p + mpmath.mpc(0, "0.5")]
    best, best_score = None, None
    for c in cand:
        d_target = abs(c - p)
        d_other = min((abs(c - s) for s in sing if abs(s - p) > 0), default=mpmath.inf)
        # the approach segment must keep away from the other singular points
        seg = min((_segment_distance(c, p, s) for s in sing if abs(s - p) > 0), default=mpmath.inf)
        score = min(d_target, d_other, seg)
        if d_target > 0 and (best_score is None or score > best_score):
            best, best_score = c, score
        if c == cand[0] and score > mpmath.mpf("0.01"):
            return c
    return best
