"""Integer relations, minimal polynomials and the bounded "~" relation.

PSLQ comes from mpmath.  Everything here accepts either a number or a
callable ``f(ctx) -> number``; with a callable the candidate relation is
re-checked on values recomputed at the certification precision, which is
what turns a PSLQ hit into an ``algebraic-found`` verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import PrecisionTooLow
from .exact_algebra import Poly
from .numerics import PrecisionCtx, gamma, root_of_unity, to_mpc

# bits >= GATE_FACTOR * log2(height) * (number of values)
GATE_FACTOR = 4

DEFAULT_MAX_DEG = 8
DEFAULT_MAX_HEIGHT = 10**8

Value = Union[object, Callable[[PrecisionCtx], object]]


def _resolve(x: Value, ctx: PrecisionCtx):
    if callable(x):
        return x(ctx)
    return x


def precision_gate(bits: int, max_height, length: int) -> int:
    """Minimum bits for a relation search of the given size."""
    return int(math.ceil(GATE_FACTOR * math.log2(max(2, max_height)) * length))


def _check_gate(ctx: PrecisionCtx, max_height, length: int) -> None:
    need = precision_gate(ctx.bits, max_height, length)
    if ctx.bits < need:
        raise PrecisionTooLow(f"{ctx.bits} bits < required {need} for height {max_height} and {length} values")


@dataclass(frozen=True)
class IntegerRelationResult:
    coefficients: Tuple[int, ...]
    residual: object
    residual_doubled: Optional[object]
    norm_bound: int
    verified_at_bits: int
    dual_certified: bool

    def to_dict(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "residual": mpmath.nstr(self.residual, 5),
            "residual_doubled": None if self.residual_doubled is None else mpmath.nstr(self.residual_doubled, 5),
            "norm_bound": self.norm_bound,
            "verified_at_bits": self.verified_at_bits,
            "dual_certified": self.dual_certified,
        }


def _primitive(vec: Sequence[int]) -> Tuple[int, ...]:
    g = reduce(math.gcd, (abs(v) for v in vec))
    if g == 0:
        return tuple(vec)
    vec = [v // g for v in vec]
    lead = next(v for v in reversed(vec) if v != 0)
    if lead < 0:
        vec = [-v for v in vec]
    return tuple(vec)


def _pslq(vals: Sequence, max_height: int, ctx: PrecisionCtx) -> Optional[List[int]]:
    with ctx.work():
        xs = [mpmath.mpf(v) for v in vals]
        if any(x == 0 for x in xs):
            idx = next(i for i, x in enumerate(xs) if x == 0)
            return [1 if i == idx else 0 for i in range(len(xs))]
        tol = mpmath.ldexp(1, -(ctx.bits * 3) // 4)
        try:
            rel = mpmath.pslq(xs, tol=tol, maxcoeff=int(max_height), maxsteps=20000 + 200 * len(xs) ** 2)
        except (ValueError, ZeroDivisionError):
            return None
    if rel is None or max(abs(c) for c in rel) > max_height:
        return None
    return list(rel)


_LAMBDAS = ("sqrt2", "pi-3", "e/3")


def _lam(which: str):
    if which == "sqrt2":
        return mpmath.sqrt(2)
    if which == "pi-3":
        return mpmath.pi - 3
    return mpmath.e / 3


def _is_real(vals: Sequence, ctx: PrecisionCtx) -> bool:
    with ctx.work():
        scale = max(abs(v) for v in vals) or 1
        tol = mpmath.ldexp(scale, -(ctx.bits * 3) // 4)
        return all(abs(mpmath.mpc(v).imag) <= tol for v in vals)


def _residual(coeffs: Sequence[int], vals: Sequence, ctx: PrecisionCtx):
    with ctx.work():
        s = mpmath.mpc(0)
        scale = mpmath.mpf(0)
        for c, v in zip(coeffs, vals):
            s += c * mpmath.mpc(v)
            scale = max(scale, abs(c * mpmath.mpc(v)))
        return abs(s) / (scale or 1)


def integer_relation(values: Union[Sequence, Callable], max_height: int, ctx: PrecisionCtx, gate: bool = True) -> Optional[IntegerRelationResult]:
    """Primitive integer vector annihilating the values (real or complex).

    Complex inputs are reduced to one real search through a fixed irrational
    combination Re + lambda*Im; the candidate must then annihilate real and
    imaginary parts separately.  The residual is relative to the largest
    term, and must sit below 2^(-bits/2) at both precisions.
    """
    vals = list(_resolve(values, ctx))
    if len(vals) < 2:
        raise ValueError("need at least two values")
    if gate:
        _check_gate(ctx, max_height, len(vals))
    real = _is_real(vals, ctx)
    candidates = []
    with ctx.work():
        if real:
            rel = _pslq([mpmath.mpc(v).real for v in vals], max_height, ctx)
            if rel is not None:
                candidates.append(rel)
        else:
            for which in _LAMBDAS:
                lam = _lam(which)
                comb = [mpmath.mpc(v).real + lam * mpmath.mpc(v).imag for v in vals]
                rel = _pslq(comb, max_height, ctx)
                if rel is None:
                    break
                candidates.append(rel)
                if _residual(rel, vals, ctx) < mpmath.ldexp(1, -ctx.bits // 2):
                    break
    for rel in candidates:
        coeffs = _primitive(rel)
        res = _residual(coeffs, vals, ctx)
        with ctx.work():
            ok = res < mpmath.ldexp(1, -ctx.bits // 2)
        if not ok:
            continue
        res2 = None
        dual = False
        if callable(values):
            hi = ctx.doubled()
            vals2 = list(values(hi))
            res2 = _residual(coeffs, vals2, hi)
            with hi.work():
                dual = bool(res2 < mpmath.ldexp(1, -hi.bits // 2))
        return IntegerRelationResult(coeffs, res, res2, int(max_height), ctx.doubled().bits if dual else ctx.bits, dual)
    return None


# --------------------------------------------------------------------------
# minimal polynomials


@dataclass(frozen=True)
class MinimalPolynomialCandidate:
    coefficients: Tuple[int, ...]  # ascending
    degree: int
    height: int
    residual: object
    residual_doubled: Optional[object]
    dual_certified: bool

    @property
    def poly(self) -> Poly:
        return Poly(self.coefficients)

    def to_text(self, var: str = "x") -> str:
        return self.poly.to_compact(var)

    def to_dict(self) -> dict:
        return {
            "polynomial": self.to_text(),
            "coefficients_ascending": list(self.coefficients),
            "degree": self.degree,
            "height": self.height,
            "residual": mpmath.nstr(self.residual, 5),
            "residual_doubled": None if self.residual_doubled is None else mpmath.nstr(self.residual_doubled, 5),
            "dual_certified": self.dual_certified,
        }


def minimal_polynomial(x: Value, max_deg: int, max_height: int, ctx: PrecisionCtx) -> Optional[MinimalPolynomialCandidate]:
    """Lowest-degree primitive integer polynomial (degree <= max_deg, height <= max_height) vanishing at x."""
    if max_deg < 1:
        raise ValueError("max_deg must be at least 1")

    cache = {}

    def cached_x(c: PrecisionCtx):
        if c.bits not in cache:
            cache[c.bits] = _resolve(x, c)
        return cache[c.bits]

    xv = cached_x
    for d in range(1, max_deg + 1):
        need = precision_gate(ctx.bits, max_height, d + 1)
        if ctx.bits < need:
            raise PrecisionTooLow(f"{ctx.bits} bits < required {need} for degree {d}, height {max_height}")

        def f(c: PrecisionCtx, d=d):
            v = to_mpc(xv(c))
            with c.work():
                out, p = [], mpmath.mpc(1)
                for _ in range(d + 1):
                    out.append(p)
                    p = p * v
                return out

        rel = integer_relation(f if callable(x) else f(ctx), max_height, ctx, gate=False)
        if rel is None:
            continue
        coeffs = rel.coefficients
        if coeffs[-1] == 0:
            # relation of lower degree would have been found earlier unless the
            # earlier search missed it; trim and accept
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            if len(coeffs) < 2:
                continue
            coeffs = _primitive(coeffs)
        return MinimalPolynomialCandidate(
            tuple(coeffs),
            len(coeffs) - 1,
            max(abs(c) for c in coeffs),
            rel.residual,
            rel.residual_doubled,
            rel.dual_certified,
        )
    return None


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class AlgebraicityReport:
    verdict: str  # algebraic-found | no-relation-at-bounds | inconclusive
    evidence: Optional[MinimalPolynomialCandidate]
    bounds: dict
    precision_bits: int
    value: object = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "evidence": None if self.evidence is None else self.evidence.to_dict(),
            "bounds": dict(self.bounds),
            "precision_bits": self.precision_bits,
        }


def _report(x: Value, max_deg: int, max_height: int, ctx: PrecisionCtx) -> AlgebraicityReport:
    cand = minimal_polynomial(x, max_deg, max_height, ctx)
    bounds = {"max_deg": max_deg, "max_height": max_height}
    val = _resolve(x, ctx) if callable(x) else x
    if cand is None:
        return AlgebraicityReport("no-relation-at-bounds", None, bounds, ctx.bits, val)
    if callable(x) and not cand.dual_certified:
        return AlgebraicityReport("inconclusive", cand, bounds, ctx.bits, val)
    return AlgebraicityReport("algebraic-found", cand, bounds, ctx.bits, val)


def sim_test(r: Value, s: Value, max_deg: int, max_height: int, ctx: PrecisionCtx) -> AlgebraicityReport:
    """Test r ~ s, i.e. whether r/s is algebraic within the bounds."""

    def ratio(c: PrecisionCtx):
        rv, sv = to_mpc(_resolve(r, c)), to_mpc(_resolve(s, c))
        if sv == 0:
            raise ValueError("s must be nonzero")
        with c.work():
            return rv / sv

    x = ratio if (callable(r) or callable(s)) else ratio(ctx)
    return _report(x, max_deg, max_height, ctx)


def algebraicity_report(x: Value, max_deg: int, max_height: int, ctx: PrecisionCtx) -> AlgebraicityReport:
    return _report(x, max_deg, max_height, ctx)


def gamma_third_constant(ctx: PrecisionCtx):
    """Gamma(1/3)^3 / pi^2."""
    with ctx.work():
        return gamma(Fraction(1, 3), ctx) ** 3 / mpmath.pi ** 2


def gamma_quotient_test(value: Value, ctx: PrecisionCtx, max_deg: int = DEFAULT_MAX_DEG, max_height: int = DEFAULT_MAX_HEIGHT) -> AlgebraicityReport:
    return sim_test(value, gamma_third_constant, max_deg, max_height, ctx)


@dataclass(frozen=True)
class Cyclotomic3Result:
    member: bool
    p: Optional[Fraction]
    q: Optional[Fraction]
    relation: Optional[IntegerRelationResult]
    bounds: dict

    def to_dict(self) -> dict:
        return {
            "verdict": "yes" if self.member else "no-at-bounds",
            "p": None if self.p is None else str(self.p),
            "q": None if self.q is None else str(self.q),
            "relation": None if self.relation is None else self.relation.to_dict(),
            "bounds": dict(self.bounds),
        }


def in_cyclotomic3(x: Value, max_height: int, ctx: PrecisionCtx) -> Cyclotomic3Result:
    """Write x = p + q*zeta_3 with rationals of bounded height, if possible."""

    def vals(c: PrecisionCtx):
        v = to_mpc(_resolve(x, c))
        with c.work():
            return [v, mpmath.mpc(1), root_of_unity(3, 1, c)]

    rel = integer_relation(vals if callable(x) else vals(ctx), max_height, ctx)
    bounds = {"max_height": max_height}
    if rel is None or rel.coefficients[0] == 0 or (callable(x) and not rel.dual_certified):
        return Cyclotomic3Result(False, None, None, rel, bounds)
    n, a, b = rel.coefficients
    return Cyclotomic3Result(True, Fraction(-a, n), Fraction(-b, n), rel, bounds)
