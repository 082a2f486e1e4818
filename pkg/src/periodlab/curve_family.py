"""Superelliptic curves y^k = x^m0 (1-x)^m1 (z-x)^mz and their periods.

Two independent jobs live here:

* exact verification of coordinate maps between curve models (the
  hyperelliptic model of X(6,z), its automorphisms, and the elliptic
  quotients), by evaluating the printed formulas at rational points inside
  Q(zeta_m)[y]/(y^n - R), with dual numbers for differential claims;
* quadrature of eta_1, eta_2 over Pochhammer cycles, compared against the
  closed-form hypergeometric period matrix.
"""

from __future__ import annotations

import ast
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath

from .errors import (
    BranchAmbiguity,
    DegenerateBranchData,
    ExceptionalPoint,
    ParseError,
    PreconditionError,
    QuadratureNonconvergence,
)
from .exact_algebra import CyclotomicField, CycloNumber, PureElement, PureExtension
from .numerics import PrecisionCtx, expi2pi, to_mp, to_mpc


# --------------------------------------------------------------------------
# genus


def superelliptic_genus(k: int, exponents: Sequence[int]) -> int:
    """Genus of the smooth model of y^k = x^m0 (1-x)^m1 (z-x)^mz by Riemann-Hurwitz.

    The curve must be irreducible (gcd of k and all exponents, including the
    one at infinity, equal to 1).
    """
    if k < 2:
        raise DegenerateBranchData("k must be at least 2")
    m = [int(e) % k for e in exponents]
    if len(m) != 3:
        raise DegenerateBranchData("need exponents at 0, 1 and z")
    if any(e == 0 for e in m):
        raise DegenerateBranchData(f"exponents {tuple(exponents)} must be nonzero mod {k}")
    m_inf = (-sum(m)) % k
    if math.gcd(k, math.gcd(m[0], math.gcd(m[1], m[2]))) != 1:
        raise DegenerateBranchData("the curve is reducible")
    ram = sum(k - math.gcd(k, e) for e in m + [m_inf])
    two_g_minus_2 = -2 * k + ram
    return two_g_minus_2 // 2 + 1


@dataclass(frozen=True)
class SuperellipticModel:
    k: int
    exponents: Tuple[int, int, int]
    z: object

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) % self.k for e in self.exponents))
        if any(e == 0 for e in self.exponents):
            raise DegenerateBranchData("exponents must be nonzero mod k")

    @property
    def genus(self) -> int:
        return superelliptic_genus(self.k, self.exponents)

    @property
    def mu(self) -> Tuple[Fraction, Fraction, Fraction]:
        return tuple(Fraction(e, self.k) for e in self.exponents)


# --------------------------------------------------------------------------
# restricted formula evaluation


def _parse_formula(text: str) -> ast.AST:
    src = text.replace("^", "**").strip()
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse formula {text!r}: {exc}") from exc
    for node in ast.walk(tree):
        ok = isinstance(
            node,
            (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Name, ast.Constant, ast.Load,
             ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd),
        )
        if not ok:
            raise ParseError(f"unsupported syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise ParseError(f"only integer literals are allowed in {text!r}")
    return tree


def _int_exponent(node: ast.AST) -> int:
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.operand, ast.Constant):
        v = node.operand.value
        return -v if isinstance(node.op, ast.USub) else v
    raise ParseError("exponents must be integer literals")


def evaluate_formula(tree_or_text, env: Dict[str, object], lift: Callable[[int], object]):
    """Evaluate +, -, *, /, integer powers over whatever ring the env values live in."""
    tree = _parse_formula(tree_or_text) if isinstance(tree_or_text, str) else tree_or_text

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            return lift(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ParseError(f"unknown name {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                return _power(ev(node.left), _int_exponent(node.right), lift)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                try:
                    return left / right
                except ZeroDivisionError as exc:
                    raise ExceptionalPoint("a denominator vanishes at the sample point") from exc
        raise ParseError(f"unsupported node {type(node).__name__}")

    return ev(tree)


def _power(base, k: int, lift):
    if k >= 0:
        out = lift(1)
        for _ in range(k):
            out = out * base
        return out
    try:
        return lift(1) / _power(base, -k, lift)
    except ZeroDivisionError as exc:
        raise ExceptionalPoint("negative power of zero") from exc


class Dual:
    """a + b*eps with eps^2 = 0 over any commutative ring."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a, self.b = a, b

    @staticmethod
    def _c(o, like):
        if isinstance(o, Dual):
            return o
        return Dual(o, like.b * 0)

    def __add__(self, o):
        o = self._c(o, self)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, o):
        o = self._c(o, self)
        return Dual(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return self._c(o, self) - self

    def __mul__(self, o):
        o = self._c(o, self)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o, self)
        inv = 1 / o.a  # ZeroDivisionError propagates
        return Dual(self.a * inv, (self.b * o.a - self.a * o.b) * inv * inv)

    def __rtruediv__(self, o):
        return self._c(o, self) / self


# --------------------------------------------------------------------------
# coordinate-map specifications


_DIFF_RE = re.compile(r"^\s*d(\w+)\s*/\s*(\w+)\s*=\s*(.+?)\s*\*\s*d(\w+)\s*/\s*(\w+)\s*$")
_ZETA_RE = re.compile(r"zeta(\d+)")


@dataclass(frozen=True)
class AlgebraicMapSpec:
    """A map from a curve model into a target model, given by coordinate formulas.

    The source is a pure equation ``dep^n = R(indep, z)``; coordinates are
    formulas in indep, dep, z and zeta names; the target relation is
    ``lhs = rhs`` in the coordinate names; the optional differential claim is
    ``du/v = factor * dp/q``.
    """

    name: str
    source: str
    independent: str
    dependent: str
    coordinates: Tuple[Tuple[str, str], ...]
    target: str
    differential: Optional[str] = None
    fixed_z: Optional[Fraction] = None
    expected_identity: str = "holds"
    expected_differential: str = "holds"
    reference: str = ""
    note: str = ""

    @classmethod
    def from_stanza(cls, name: str, fields: Dict[str, str]) -> "AlgebraicMapSpec":
        try:
            coords = []
            for part in fields["coordinates"].split(";"):
                if part.strip():
                    lhs, rhs = part.split("=", 1)
                    coords.append((lhs.strip(), rhs.strip()))
            fixed = fields.get("fixed")
            fz = None
            if fixed:
                var, val = fixed.split("=")
                if var.strip() != "z":
                    raise ParseError("only z can be fixed")
                fz = Fraction(val.strip())
            spec = cls(
                name=name,
                source=fields["source"],
                independent=fields.get("independent", "x"),
                dependent=fields.get("dependent", "y"),
                coordinates=tuple(coords),
                target=fields["target"],
                differential=fields.get("differential"),
                fixed_z=fz,
                expected_identity=fields.get("expect-identity", "holds"),
                expected_differential=fields.get("expect-differential", "holds"),
                reference=fields.get("reference", ""),
                note=fields.get("note", ""),
            )
        except KeyError as exc:
            raise ParseError(f"map {name}: missing field {exc}") from exc
        spec._source_parts()
        return spec

    def _source_parts(self) -> Tuple[int, str]:
        lhs, rhs = self.source.split("=", 1)
        m = re.fullmatch(r"\s*(\w+)\s*\^\s*(\d+)\s*", lhs)
        if not m or m.group(1) != self.dependent:
            raise ParseError(f"source must read '{self.dependent}^n = R', got {self.source!r}")
        return int(m.group(2)), rhs.strip()

    def cyclotomic_order(self) -> int:
        texts = [self.source, self.target, self.differential or ""] + [c for _, c in self.coordinates]
        orders = [int(m) for t in texts for m in _ZETA_RE.findall(t)]
        out = 1
        for o in orders:
            out = math.lcm(out, o)
        return out

    def target_sides(self) -> Tuple[str, str]:
        lhs, rhs = self.target.split("=", 1)
        return lhs.strip(), rhs.strip()

    def differential_parts(self) -> Optional[Tuple[str, str, str, str, str]]:
        if not self.differential:
            return None
        m = _DIFF_RE.match(self.differential)
        if not m:
            raise ParseError(f"differential claim not of the form du/v = F * dp/q: {self.differential!r}")
        return m.groups()


@dataclass
class IdentitySample:
    point: Dict[str, str]
    lhs: str
    rhs: str
    holds: bool
    residual: object  # exact element or numeric modulus


@dataclass
class IdentityReport:
    map_name: str
    mode: str  # exact | numeric
    samples: List[IdentitySample]
    max_residual: object
    holds: bool
    expected: str

    @property
    def matches_expectation(self) -> bool:
        return self.holds == (self.expected == "holds")

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "mode": self.mode,
            "holds": self.holds,
            "expected": self.expected,
            "matches_expectation": self.matches_expectation,
            "max_residual": str(self.max_residual) if self.mode == "exact" else mpmath.nstr(self.max_residual, 5),
            "samples": [
                {"point": s.point, "lhs": s.lhs, "rhs": s.rhs, "holds": s.holds, "residual": str(s.residual)}
                for s in self.samples
            ],
        }


def _exact_point(spec: AlgebraicMapSpec, x: Fraction, z: Fraction, with_derivative: bool):
    """Coordinates at (x, z) as elements of Q(zeta)[y]/(y^n - R), optionally as duals."""
    n, rtext = spec._source_parts()
    m = spec.cyclotomic_order()
    K = CyclotomicField(m)
    base_env = {spec.independent: K(x), "z": K(z)}
    base_env.update({f"zeta{o}": K.zeta(m // o) for o in _divisors_used(spec)})
    R = evaluate_formula(rtext, base_env, K)
    if R.is_zero():
        raise ExceptionalPoint(f"R vanishes at {spec.independent}={x}")
    ring = PureExtension(K, n, R)
    y = ring.gen()
    if not with_derivative:
        env = {k: ring(v) for k, v in base_env.items()}
        env[spec.dependent] = y
        lift = ring
    else:
        denv = {k: Dual(K(v), K(0)) for k, v in base_env.items()}
        denv[spec.independent] = Dual(K(x), K(1))
        dR = evaluate_formula(rtext, denv, lambda c: Dual(K(c), K(0)))
        # n y^(n-1) y' = R'  =>  y' = R' y / (n R)
        yprime = ring(dR.b / (n * R)) * y
        env = {k: Dual(ring(v.a), ring(v.b)) for k, v in denv.items()}
        env[spec.dependent] = Dual(y, yprime)

        def lift(c):
            return Dual(ring(c), ring(0))

    for cname, ctext in spec.coordinates:
        env[cname] = evaluate_formula(ctext, env, lift)
    return env, lift, ring


def _divisors_used(spec: AlgebraicMapSpec) -> List[int]:
    texts = [spec.source, spec.target, spec.differential or ""] + [c for _, c in spec.coordinates]
    return sorted(set(int(m) for t in texts for m in _ZETA_RE.findall(t)))


def _fmt(e) -> str:
    if isinstance(e, PureElement) and e.in_base():
        return str(e.coeffs[0])
    return str(e)


def random_rational_points(spec: AlgebraicMapSpec, count: int, seed: int = 0) -> List[Tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        x = Fraction(rng.randint(-40, 40), rng.randint(1, 30))
        z = spec.fixed_z if spec.fixed_z is not None else Fraction(rng.randint(-30, 30), rng.randint(1, 25))
        if x == 0 or z in (0, 1):
            continue
        pts.append((x, z))
    return pts


def regular_rational_points(spec: AlgebraicMapSpec, count: int, seed: int = 0, max_draws: int = 1000) -> List[Tuple[Fraction, Fraction]]:
    """Seeded random points at which the map and its target are defined."""
    pts: List[Tuple[Fraction, Fraction]] = []
    pool = random_rational_points(spec, max_draws, seed)
    for pt in pool:
        try:
            identity_residual(spec, [pt])
            if spec.differential:
                differential_pullback_residual(spec, pt)
        except ExceptionalPoint:
            continue
        pts.append(pt)
        if len(pts) == count:
            return pts
    raise ExceptionalPoint(f"fewer than {count} regular points among {max_draws} draws for {spec.name}")


def identity_residual(spec: AlgebraicMapSpec, samples: Sequence, ctx: Optional[PrecisionCtx] = None) -> IdentityReport:
    """Evaluate the target relation at the image of each sample point.

    Samples are (x, z) pairs.  Rational pairs are handled exactly; others
    numerically at ctx with the principal n-th root for the dependent variable.
    """
    lhs_t, rhs_t = spec.target_sides()
    out: List[IdentitySample] = []
    exact = all(isinstance(v, (int, Fraction)) for s in samples for v in s)
    if exact:
        worst = None
        for x, z in samples:
            x, z = Fraction(x), Fraction(z)
            env, lift, _ = _exact_point(spec, x, z, with_derivative=False)
            lhs = evaluate_formula(lhs_t, env, lift)
            rhs = evaluate_formula(rhs_t, env, lift)
            res = lhs - rhs
            out.append(IdentitySample({spec.independent: str(x), "z": str(z)}, _fmt(lhs), _fmt(rhs), res.is_zero(), _fmt(res)))
            if not res.is_zero():
                worst = res
        holds = all(s.holds for s in out)
        return IdentityReport(spec.name, "exact", out, 0 if holds else _fmt(worst), holds, spec.expected_identity)
    if ctx is None:
        raise PreconditionError("numeric samples need a precision context")
    worst = mpmath.mpf(0)
    for x, z in samples:
        with ctx.work():
            env, lift = _numeric_env(spec, to_mpc(x), to_mpc(z), ctx)
            lhs = evaluate_formula(lhs_t, env, lift)
            rhs = evaluate_formula(rhs_t, env, lift)
            res = abs(lhs - rhs) / max(1, abs(lhs), abs(rhs))
            ok = res < mpmath.ldexp(1, -ctx.bits // 2)
            worst = max(worst, res)
        out.append(IdentitySample({spec.independent: mpmath.nstr(x, 15), "z": mpmath.nstr(z, 15)},
                                  mpmath.nstr(lhs, 15), mpmath.nstr(rhs, 15), bool(ok), mpmath.nstr(res, 5)))
    holds = all(s.holds for s in out)
    return IdentityReport(spec.name, "numeric", out, worst, holds, spec.expected_identity)


def _numeric_env(spec: AlgebraicMapSpec, x, z, ctx: PrecisionCtx):
    n, rtext = spec._source_parts()
    env = {spec.independent: x, "z": z}
    for o in _divisors_used(spec):
        env[f"zeta{o}"] = expi2pi(Fraction(1, o), ctx)
    lift = mpmath.mpc
    R = evaluate_formula(rtext, env, lift)
    if R == 0:
        raise ExceptionalPoint("R vanishes at the sample point")
    env[spec.dependent] = mpmath.power(R, mpmath.mpf(1) / n)
    for cname, ctext in spec.coordinates:
        env[cname] = evaluate_formula(ctext, env, lift)
    return env, lift


@dataclass
class DifferentialReport:
    map_name: str
    claim: str
    point: Dict[str, str]
    lhs: str
    rhs: str
    holds: bool
    residual: str
    expected: str

    @property
    def matches_expectation(self) -> bool:
        return self.holds == (self.expected == "holds")

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "claim": self.claim,
            "point": self.point,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "residual": self.residual,
            "expected": self.expected,
            "matches_expectation": self.matches_expectation,
        }


def differential_pullback_residual(spec: AlgebraicMapSpec, point: Tuple, ctx: Optional[PrecisionCtx] = None) -> DifferentialReport:
    """Compare du/v with factor * dp/q at a rational point, all as multiples of d(indep)."""
    parts = spec.differential_parts()
    if parts is None:
        raise PreconditionError(f"map {spec.name} carries no differential claim")
    u, v, factor, p, q = parts
    x, z = (Fraction(c) for c in point)
    env, lift, ring = _exact_point(spec, x, z, with_derivative=True)
    for nm in (u, v, p, q):
        if nm not in env:
            raise ParseError(f"unknown name {nm!r} in differential claim")
    F = evaluate_formula(factor, env, lift)
    try:
        lhs = env[u].b / env[v].a
        rhs = F.a * env[p].b / env[q].a
    except ZeroDivisionError as exc:
        raise ExceptionalPoint("a differential denominator vanishes") from exc
    res = lhs - rhs
    return DifferentialReport(
        spec.name, spec.differential, {spec.independent: str(x), "z": str(z)},
        _fmt(lhs), _fmt(rhs), res.is_zero(), _fmt(res), spec.expected_differential,
    )


# --------------------------------------------------------------------------
# eta periods


@dataclass(frozen=True)
class PochhammerCycleSpec:
    """Pochhammer cycle around two of {0, 1, z}, integrated along a polyline.

    ``via`` lists interior vertices; an empty tuple means the straight segment.
    """

    endpoints: Tuple[str, str]
    via: Tuple = ()

    def __post_init__(self):
        if tuple(self.endpoints) not in (("0", "z"), ("1", "z"), ("0", "1")):
            raise ValueError(f"endpoints must be (0,z), (1,z) or (0,1), got {self.endpoints}")


class _Factor:
    """(alpha + beta x)^e."""

    __slots__ = ("alpha", "beta", "e", "root")

    def __init__(self, alpha, beta, e: Fraction):
        self.alpha, self.beta, self.e = alpha, beta, e
        self.root = -alpha / beta


def _integrand_factors(mu: Tuple[Fraction, Fraction, Fraction], z, form: str):
    mu0, mu1, muz = mu
    if form == "eta1":
        ex, const = (-mu0, -mu1, -muz), 1
    elif form == "eta2":
        # eta_2 = x/(x-1) eta_1
        ex, const = (1 - mu0, -1 - mu1, -muz), -1
    else:
        raise ValueError("form must be 'eta1' or 'eta2'")
    one = mpmath.mpf(1)
    factors = [_Factor(mpmath.mpc(0), one, ex[0]), _Factor(one, -one, ex[1]), _Factor(z, -one, ex[2])]
    return factors, const


def _point_of(label: str, z):
    return {"0": mpmath.mpc(0), "1": mpmath.mpc(1), "z": z}[label]


def _quad_endpoint(f, e: Fraction, h, degree: int):
    """int_0^h f(t) dt where f(t) ~ t^e at 0 with e > -1.

    t = v^p with p the denominator of e + 1 makes the integrand smooth in v,
    which keeps tanh-sinh from losing the t^e mass it cannot resolve near 0.
    """
    r = Fraction(e) + 1
    p = r.denominator if (r < 1 and r.denominator > 1) else 1
    if p == 1:
        return mpmath.quad(f, [0, h], method="tanh-sinh", error=True, maxdegree=degree)
    top = h ** (mpmath.mpf(1) / p)
    return mpmath.quad(lambda v: f(v**p) * p * v ** (p - 1), [0, top], method="tanh-sinh", error=True, maxdegree=degree)


def _segment(factors, logs_ref, x_ref, P, Q, sing_start, sing_end, degree, ctx):
    """Integral over P->Q of prod L_j^e_j dx with log-branches continued from x_ref.

    ``logs_ref`` are the chosen logarithms of L_j(x_ref); x_ref lies on P->Q and
    no factor other than the endpoint ones vanishes on the segment.  Returns the
    value, the error estimate and the logarithms at Q (for the next segment).
    """
    d = Q - P

    def L_at(j, s=None, u=None):
        f = factors[j]
        if u is None:
            return f.beta * ((P - f.root) + d * s)
        return f.beta * ((Q - f.root) - d * u)

    ref_vals = [f.beta * (x_ref - f.root) for f in factors]

    def logs(s=None, u=None):
        out = []
        for j, f in enumerate(factors):
            if f.e == 0:
                out.append(logs_ref[j])
                continue
            Lv = L_at(j, s, u)
            out.append(logs_ref[j] + mpmath.log(Lv / ref_vals[j]))
        return out

    def f_total(s=None, u=None):
        lg = logs(s, u)
        return d * mpmath.exp(sum(f.e * l for f, l in zip(factors, lg)))

    def dlog(s=None, u=None, skip=None):
        # d/ds of sum e_j log L_j, excluding the factor ``skip``
        tot = mpmath.mpc(0)
        for j, f in enumerate(factors):
            if j == skip or f.e == 0:
                continue
            tot += f.e * f.beta * d / L_at(j, s, u)
        return tot

    half = mpmath.mpf(1) / 2
    total, err_tot = mpmath.mpc(0), mpmath.mpf(0)
    for side, sing in (("left", sing_start), ("right", sing_end)):
        sgn = 1 if side == "left" else -1

        def F(t, side=side):
            return f_total(s=t) if side == "left" else f_total(u=t)

        e = factors[sing].e if sing is not None else Fraction(0)
        if e <= -2:
            raise QuadratureNonconvergence(f"endpoint exponent {e} is below the supported range (-2, -1)")
        if e <= -1:
            # finite part of int_0^{1/2} t^e g(t) dt through one integration by parts
            ee = to_mp(e)

            def g(t, F=F, ee=ee):
                return F(t) / t ** ee

            def integrand(t, g=g, ee=ee, side=side, sgn=sgn, sing=sing):
                gt = g(t)
                dl = dlog(s=t, skip=sing) if side == "left" else dlog(u=t, skip=sing)
                return t ** (ee + 1) * sgn * gt * dl

            val, err = _quad_endpoint(integrand, e + 1, half, degree)
            total += half ** (ee + 1) / (ee + 1) * g(half) - val / (ee + 1)
            err_tot += abs(err / (ee + 1))
        else:
            val, err = _quad_endpoint(F, e, half, degree)
            total += val
            err_tot += err
    end_logs = None
    if sing_end is None:
        end_logs = logs(u=mpmath.mpf(0))
    return total, err_tot, end_logs


def eta_period(k: int, exponents: Sequence[int], z, cycle: PochhammerCycleSpec, form: str, ctx: PrecisionCtx, degree: Optional[int] = None):
    """Integral of eta_1 or eta_2 over the Pochhammer cycle on y^k = x^m0 (1-x)^m1 (z-x)^mz.

    eta_1 = x^-mu0 (1-x)^-mu1 (z-x)^-mu dx with mu_i = m_i / k, eta_2 = x/(x-1) eta_1.
    The value is (1 - E(alpha_A))(1 - E(alpha_B)) times the path integral from
    A to B (alpha = local exponents), with each power taken as the principal
    value at the midpoint of the first segment and continued along the path.
    Endpoint exponents in (-2, -1) are handled as Hadamard finite parts, which
    is what the Pochhammer integral equals.
    """
    if k < 1:
        raise DegenerateBranchData("k must be positive")
    mu = tuple(Fraction(int(m), k) for m in exponents)
    deg = degree or max(6, int(math.log2(ctx.bits)) + 3)
    with ctx.work():
        zz = to_mpc(z)
        if zz == 0 or zz == 1:
            raise PreconditionError("z must avoid 0 and 1")
        factors, const = _integrand_factors(mu, zz, form)
        A, B = (_point_of(lbl, zz) for lbl in cycle.endpoints)
        verts = [A] + [to_mpc(v) for v in cycle.via] + [B]
        idx = {"0": 0, "1": 1, "z": 2}
        ia, ib = idx[cycle.endpoints[0]], idx[cycle.endpoints[1]]
        branch_pts = [f.root for f in factors]
        # path must avoid the branch points except at its ends
        tol = mpmath.ldexp(1, -ctx.bits // 3)
        for si in range(len(verts) - 1):
            P, Q = verts[si], verts[si + 1]
            for j, bp in enumerate(branch_pts):
                if factors[j].e == 0:
                    continue
                if (si == 0 and j == ia) or (si == len(verts) - 2 and j == ib):
                    continue
                if _seg_dist(P, Q, bp) < tol:
                    raise BranchAmbiguity(f"path segment {si} touches the branch point {mpmath.nstr(bp, 8)}")
        P0, Q0 = verts[0], verts[1]
        mid = (P0 + Q0) / 2
        logs_ref = [mpmath.log(f.beta * (mid - f.root)) if f.e != 0 else mpmath.mpc(0) for f in factors]
        x_ref = mid
        total, err = mpmath.mpc(0), mpmath.mpf(0)
        for si in range(len(verts) - 1):
            P, Q = verts[si], verts[si + 1]
            ss = ia if si == 0 else None
            se = ib if si == len(verts) - 2 else None
            val, e, end_logs = _segment(factors, logs_ref, x_ref, P, Q, ss, se, deg, ctx)
            total += val
            err += e
            if end_logs is not None:
                logs_ref, x_ref = end_logs, Q
        alpha_a, alpha_b = factors[ia].e, factors[ib].e
        pf = (1 - expi2pi(alpha_a)) * (1 - expi2pi(alpha_b))
        value = const * pf * total
        if err > mpmath.ldexp(max(1, abs(total)), -ctx.bits // 2):
            raise QuadratureNonconvergence(f"quadrature error estimate {mpmath.nstr(err, 3)}")
        return value


def _seg_dist(P, Q, p):
    d = Q - P
    if d == 0:
        return abs(p - P)
    t = ((p - P) * mpmath.conj(d)).real / abs(d) ** 2
    t = min(max(t, 0), 1)
    return abs(p - (P + t * d))


def pochhammer_contour_integral(f_data, a, b, ctx: PrecisionCtx, degree: Optional[int] = None):
    """Integrate prod (x - p_j)^e_j over the commutator contour around a and b.

    ``f_data`` is a list of (point, exponent) pairs including a and b.  The
    contour starts at the midpoint m of [a, b] and runs: circle around b
    counterclockwise, circle around a counterclockwise, circle around b
    clockwise, circle around a clockwise (radius |b - a|/2 each).  With this
    order the result is (1 - E(e_a))(1 - E(e_b)) times the segment integral
    from a to b; starting with a instead flips the sign.  The branch at m is
    the principal one and is continued along the circles.  Other
    branch points must stay outside both circles.
    """
    deg = degree or max(6, int(math.log2(ctx.bits)) + 3)
    with ctx.work():
        a, b = to_mpc(a), to_mpc(b)
        m = (a + b) / 2
        r = abs(b - a) / 2
        pts = [(to_mpc(p), to_mp(e)) for p, e in f_data]
        for p, _ in pts:
            if p != a and p != b and (abs(p - a) <= r * (1 + mpmath.mpf(1) / 100) or abs(p - b) <= r * (1 + mpmath.mpf(1) / 100)):
                raise BranchAmbiguity("another branch point lies inside a loop")
        logs = [mpmath.log(m - p) for p, _ in pts]
        total = mpmath.mpc(0)
        for center, sign in ((b, 1), (a, 1), (b, -1), (a, -1)):
            start = m - center
            cur = list(logs)

            def integrand(th, center=center, sign=sign, start=start, cur=cur):
                x = center + start * mpmath.expj(sign * th)
                dx = 1j * sign * start * mpmath.expj(sign * th)
                lg = mpmath.mpc(0)
                for (p, e), l0 in zip(pts, cur):
                    if p == center:
                        lv = l0 + 1j * sign * th
                    else:
                        lv = l0 + mpmath.log((x - p) / (m - p))
                    lg += e * lv
                return mpmath.exp(lg) * dx

            total += mpmath.quad(integrand, [0, mpmath.pi / 2, mpmath.pi, 3 * mpmath.pi / 2, 2 * mpmath.pi], maxdegree=deg)
            for j, (p, _) in enumerate(pts):
                if p == center:
                    logs[j] = logs[j] + 2j * mpmath.pi * sign
        return total


# --------------------------------------------------------------------------
# period matrix


@dataclass
class PeriodMatrixComparison:
    z: object
    quadrature: object
    closed_form: object
    max_deviation: object

    def to_dict(self, digits: int = 20) -> dict:
        def m2(M):
            return [[mpmath.nstr(M[i, j], digits) for j in range(2)] for i in range(2)]

        return {
            "z": str(self.z),
            "quadrature": m2(self.quadrature),
            "closed_form": m2(self.closed_form),
            "max_deviation": mpmath.nstr(self.max_deviation, 5),
        }


DEFAULT_K = 6
DEFAULT_EXPONENTS = (1, 1, 5)


def period_matrix_compare(z, ctx: PrecisionCtx, k: int = DEFAULT_K, exponents: Sequence[int] = DEFAULT_EXPONENTS, degree: Optional[int] = None) -> PeriodMatrixComparison:
    """Quadrature periods of (eta_1, eta_2) over [0,z], [1,z] against the closed form.

    The exponent data mu = m/k correspond to Gauss parameters
    a = 1 - mu0, b = mu1, c = 1 + a - mu.
    """
    from .hypergeom import HypergeomParams, fundamental_matrix

    with ctx.work():
        zv = to_mpc(z)
        if not (zv.imag == 0 and 0 < zv.real < 1):
            raise PreconditionError("z must be real in (0, 1)")
    mu0, mu1, muz = (Fraction(int(m), k) for m in exponents)
    a = 1 - mu0
    params = HypergeomParams(a, mu1, 1 + a - muz)
    Y = fundamental_matrix(params, z, ctx, "akh").entries
    with ctx.work():
        Q = mpmath.matrix(2, 2)
    for j, ends in enumerate((("0", "z"), ("1", "z"))):
        for i, form in enumerate(("eta1", "eta2")):
            Q[i, j] = eta_period(k, exponents, z, PochhammerCycleSpec(ends), form, ctx, degree)
    with ctx.work():
        dev = max(abs(Q[i, j] - Y[i, j]) for i in range(2) for j in range(2))
    return PeriodMatrixComparison(z, Q, Y, dev)
