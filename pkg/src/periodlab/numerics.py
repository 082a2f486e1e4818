"""Precision contexts and the handful of special values the rest of the package needs.

mpmath supplies the arbitrary-precision floats.  Its working precision is a
process-wide setting, so every entry point here enters ``ctx.work()``
explicitly instead of trusting whatever precision happens to be active.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

import mpmath
from mpmath import mp

from .errors import PoleAtNonpositiveInteger, ZeroBase

# Values are plain mpmath numbers; the alias documents intent in signatures.
AppComplex = mpmath.mpc
Number = Union[int, Fraction, "mpmath.mpf", "mpmath.mpc", complex, float]


@dataclass(frozen=True)
class PrecisionCtx:
    bits: int
    certify_ratio: int = 2

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits}")
        if self.certify_ratio < 2:
            raise ValueError("certify_ratio must be >= 2")

    @classmethod
    def from_digits(cls, digits: int, certify_ratio: int = 2) -> "PrecisionCtx":
        return cls(bits=math.ceil(digits * 3.33) + 32, certify_ratio=certify_ratio)

    @property
    def digits(self) -> int:
        return int(self.bits / 3.33)

    def doubled(self) -> "PrecisionCtx":
        return PrecisionCtx(self.bits * self.certify_ratio, self.certify_ratio)

    def with_bits(self, bits: int) -> "PrecisionCtx":
        return PrecisionCtx(bits, self.certify_ratio)

    def eps(self):
        return mpmath.ldexp(mpmath.mpf(1), -self.bits)

    @contextmanager
    def work(self) -> Iterator[None]:
        with mp.workprec(self.bits):
            yield


def to_mp(x: Number):
    """Convert an exact or float input into an mpmath number at the active precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, int):
        return mpmath.mpf(x)
    if isinstance(x, complex):
        return mpmath.mpc(x.real, x.imag)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        # no rounding: the value may come from a higher precision than the active one
        return x
    if hasattr(x, "to_mp"):
        return x.to_mp()
    return mpmath.mpmathify(x)


def to_mpc(x: Number):
    v = to_mp(x)
    if isinstance(v, mpmath.mpc):
        return v
    if isinstance(v, mpmath.mpf):
        return mp.make_mpc((v._mpf_, mpmath.libmp.fzero))
    return mpmath.mpc(v)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def _as_exact(x) -> Fraction | None:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return None


def _check_pole(x) -> None:
    ex = _as_exact(x)
    if ex is not None:
        if ex.denominator == 1 and ex <= 0:
            raise PoleAtNonpositiveInteger(f"Gamma has a pole at {ex}")
        return
    v = to_mpc(x)
    if v.imag == 0 and v.real <= 0 and v.real == mpmath.floor(v.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {v}")


def gamma(x, ctx: PrecisionCtx):
    """Gamma function; exact rational inputs are converted at working precision."""
    _check_pole(x)
    with ctx.work():
        v = mpmath.gamma(to_mp(x))
        return +v


def rgamma(x, ctx: PrecisionCtx):
    """Reciprocal Gamma, zero at the poles."""
    with ctx.work():
        return mpmath.rgamma(to_mp(x))


def beta(a, b, ctx: PrecisionCtx):
    for v in (a, b, Fraction(a) + Fraction(b)):
        _check_pole(v)
    with ctx.work():
        aa, bb = to_mp(a), to_mp(b)
        return mpmath.gamma(aa) * mpmath.gamma(bb) * mpmath.rgamma(aa + bb)


def pow_principal(base, exponent, ctx: PrecisionCtx):
    """base**exponent with the principal logarithm (argument in (-pi, pi])."""
    with ctx.work():
        b = to_mpc(base)
        e = Fraction(exponent)
        if b == 0:
            if e > 0:
                return mpmath.mpc(0)
            raise ZeroBase("0 raised to a nonpositive power")
        if e.denominator == 1:
            return b ** int(e)
        return mpmath.exp(to_mp(e) * mpmath.log(b))


def expi2pi(x, ctx: PrecisionCtx | None = None):
    """exp(2*pi*i*x), exact on the real and imaginary axes when 2x is an integer."""

    def _go():
        if isinstance(x, (int, Fraction)):
            f = Fraction(x) % 1
            two = 2 * f
            return mpmath.mpc(mpmath.cospi(to_mp(two)), mpmath.sinpi(to_mp(two)))
        return mpmath.mpc(mpmath.expjpi(2 * to_mp(x)))

    if ctx is None:
        return _go()
    with ctx.work():
        return _go()


def root_of_unity(d: int, i: int, ctx: PrecisionCtx):
    if d < 1:
        raise ValueError("d must be positive")
    return expi2pi(Fraction(i % d, d), ctx)


@dataclass(frozen=True)
class RootOfUnity:
    """The exact symbol zeta_d^i; products stay exact, evaluation is on demand."""

    d: int
    i: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        object.__setattr__(self, "i", self.i % self.d)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        d = math.lcm(self.d, other.d)
        return RootOfUnity(d, self.i * (d // self.d) + other.i * (d // other.d)).reduced()

    def __pow__(self, n: int) -> "RootOfUnity":
        return RootOfUnity(self.d, self.i * n).reduced()

    def reduced(self) -> "RootOfUnity":
        g = math.gcd(self.d, self.i) if self.i else self.d
        return RootOfUnity(self.d // g, self.i // g)

    @property
    def order(self) -> int:
        return self.reduced().d

    def value(self, ctx: PrecisionCtx):
        return root_of_unity(self.d, self.i, ctx)


def certified_digits(a, b) -> int:
    """Number of leading decimal digits on which two evaluations agree."""
    a, b = mpmath.mpmathify(a), mpmath.mpmathify(b)
    scale = max(abs(a), abs(b))
    diff = abs(a - b)
    if scale == 0 or diff == 0:
        return int(mp.dps)
    return max(0, int(mpmath.floor(-mpmath.log10(diff / scale))))


def matrix_certified_digits(a: Sequence[Sequence], b: Sequence[Sequence]) -> int:
    best = None
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if abs(mpmath.mpmathify(y)) == 0 and abs(mpmath.mpmathify(x)) == 0:
                continue
            d = certified_digits(x, y)
            best = d if best is None else min(best, d)
    return best if best is not None else int(mp.dps)


def certify(fn: Callable[[PrecisionCtx], object], ctx: PrecisionCtx):
    """Evaluate ``fn`` at ctx and at the certification precision.

    Returns (high-precision value, certified digits).  Values may be scalars or
    nested sequences of scalars.
    """
    lo = fn(ctx)
    hi_ctx = ctx.doubled()
    hi = fn(hi_ctx)
    with hi_ctx.work():
        if isinstance(lo, (list, tuple)) or hasattr(lo, "rows"):
            la = _as_rows(lo)
            ha = _as_rows(hi)
            digits = matrix_certified_digits(la, ha)
        else:
            digits = certified_digits(lo, hi)
    return hi, min(digits, ctx.digits)


def _as_rows(v):
    if hasattr(v, "rows") and hasattr(v, "cols"):
        return [[v[i, j] for j in range(v.cols)] for i in range(v.rows)]
    if v and isinstance(v[0], (list, tuple)):
        return v
    return [list(v)]


def mp_str(x, digits: int) -> str:
    """Render a number with a fixed number of significant digits."""
    return mpmath.nstr(x, max(1, digits), strip_zeros=False)
