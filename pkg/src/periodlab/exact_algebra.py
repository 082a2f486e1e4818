"""Exact univariate algebra over the rationals.

Polynomials are immutable tuples of ``Fraction`` coefficients in ascending
degree.  Rational functions are kept reduced with a monic denominator, which
makes structural equality coincide with mathematical equality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import mpmath

from .errors import IterationDivergence, ParseError
from .numerics import PrecisionCtx, to_mp

Scalar = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot treat {x!r} as an exact rational")


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)

    # construction
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # ring operations
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = _frac(c)
        return Poly(c * x for x in self.coeffs)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quo), Poly(rem[: other.degree])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, x0) -> "Poly":
        """p(t + x0)."""
        return self.compose(Poly([x0, 1]))

    # evaluation
    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x):
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + to_mp(c)
        return acc

    # content / primitive part
    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs))
        den = reduce(math.lcm, (c.denominator for c in self.coeffs))
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer primitive form with positive leading coefficient."""
        if self.is_zero():
            return self
        p = self.scale(1 / self.content())
        return -p if p.lc < 0 else p

    def int_coeffs(self) -> List[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial has non-integer coefficients")
            out.append(c.numerator)
        return out

    def height(self) -> Fraction:
        return max((abs(c) for c in self.coeffs), default=Fraction(0))

    def squarefree_decomposition(self) -> List[Tuple["Poly", int]]:
        """Yun's algorithm: list of (squarefree factor, multiplicity)."""
        if self.degree < 1:
            return []
        f = self.monic()
        fp = f.derivative()
        a = poly_gcd(f, fp)
        b = f.exact_div(a)
        c = fp.exact_div(a)
        d = c - b.derivative()
        out, i = [], 1
        while b.degree >= 1:
            a = poly_gcd(b, d)
            if a.degree >= 1:
                out.append((a, i))
            b = b.exact_div(a)
            c = d.exact_div(a)
            d = c - b.derivative()
            i += 1
        return out

    def rational_roots(self) -> List[Fraction]:
        """All rational roots (rational root theorem on the primitive form)."""
        if self.degree < 1:
            return []
        p = self.primitive()
        roots: List[Fraction] = []
        while p.degree >= 1 and p[0] == 0:
            if Fraction(0) not in roots:
                roots.append(Fraction(0))
            p = Poly(p.coeffs[1:])
        if p.degree < 1:
            return roots
        a0 = abs(p.int_coeffs()[0])
        an = abs(p.int_coeffs()[-1])
        for num in _divisors(a0):
            for den in _divisors(an):
                for s in (1, -1):
                    r = Fraction(s * num, den)
                    if r not in roots and p(r) == 0:
                        roots.append(r)
        return sorted(roots)

    # text
    def to_text(self, var: str = "t") -> str:
        """Render in the ``c0 + c1*t + c2*t^2`` exchange format."""
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = str(c)
            if not mono:
                terms.append(cs)
            else:
                terms.append(f"{cs}*{mono}")
        out = terms[0]
        for term in terms[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    def to_compact(self, var: str = "t") -> str:
        """Descending-degree display such as ``27t^3-16t``."""
        if self.is_zero():
            return "0"
        out = ""
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and a == 1:
                body = mono
            else:
                body = (f"{a}" if a.denominator == 1 else f"{a.numerator}/{a.denominator}") + mono
            if not out:
                out = ("-" if sign == "-" else "") + body
            else:
                out += sign + body
        return out

    def __repr__(self) -> str:
        return f"Poly({self.to_text()})"

    __str__ = to_text


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n == 0:
        return [1]
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_xgcd(a: Poly, b: Poly) -> Tuple[Poly, Poly, Poly]:
    """(g, s, u) with s*a + u*b = g monic."""
    r0, r1 = a, b
    s0, s1 = Poly([1]), Poly()
    u0, u1 = Poly(), Poly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero():
        return r0, s0, u0
    inv = 1 / r0.lc
    return r0.scale(inv), s0.scale(inv), u0.scale(inv)


# --------------------------------------------------------------------------
# parsing of the textual polynomial format

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^()]))")


def parse_poly(text: str, var: str = "t") -> Poly:
    """Parse expressions like ``c0 + c1*t + c2*t^2`` or ``(27t^3-16t)``.

    The grammar is a small arithmetic language with +, -, *, ^ (or **),
    parentheses, rational literals and the single variable; implicit
    multiplication (``27t``) is accepted.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("var") is not None:
            name = m.group("var")
            if name != var:
                # allow a leading integer glued to the variable, e.g. '27t'
                raise ParseError(f"unknown symbol {name!r} (expected {var!r})")
            tokens.append(("var", name))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op))
    parser = _PolyParser(tokens)
    p = parser.expr()
    if parser.i != len(tokens):
        raise ParseError(f"trailing input in {text!r}")
    if not isinstance(p, Poly):
        p = Poly([p])
    return p


class _PolyParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self) -> Poly:
        kind, val = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Poly:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "op" and val == "/":
                self.take()
                d = self.power()
                if d.degree != 0:
                    raise ParseError("division by a non-constant in a polynomial")
                acc = acc.scale(1 / d[0])
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, e = self.take()
            if k != "num" or e.denominator != 1:
                raise ParseError("exponent must be a nonnegative integer")
            return base ** int(e)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly([val])
        if kind == "var":
            return Poly([0, 1])
        if kind == "op" and val == "(":
            e = self.expr()
            k, v = self.take()
            if v != ")":
                raise ParseError("unbalanced parenthesis")
            return e
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}")


# --------------------------------------------------------------------------
# rational functions


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        self.num = num.scale(1 / lc)
        self.den = den.scale(1 / lc)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "RationalFunction":
        if "/(" in text.replace(" ", ""):
            compact = text.replace(" ", "")
            idx = _top_level_slash(compact)
            if idx is not None:
                return cls(parse_poly(compact[:idx], var), parse_poly(compact[idx + 1 :], var))
        return cls(parse_poly(text, var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            other = as_ratfunc(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = as_ratfunc(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-as_ratfunc(other))

    def __rsub__(self, other):
        return as_ratfunc(other) - self

    def __mul__(self, other):
        other = as_ratfunc(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * as_ratfunc(other).inverse()

    def __rtruediv__(self, other):
        return as_ratfunc(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def derivative(self) -> "RationalFunction":
        return ratfunc_derivative(self)

    def compose(self, inner: Poly) -> "RationalFunction":
        """f(s(t)) for a polynomial substitution s."""
        return RationalFunction(self.num.compose(inner), self.den.compose(inner))

    def __call__(self, x):
        d = self.den(x)
        return self.num(x) / d

    def eval_mp(self, x):
        return self.num.eval_mp(x) / self.den.eval_mp(x)

    def to_text(self, var: str = "t") -> str:
        if self.den == Poly([1]):
            return self.num.to_text(var)
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"

    def __repr__(self):
        return f"RationalFunction({self.to_text()})"

    __str__ = to_text


def _top_level_slash(s: str) -> Optional[int]:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and i + 1 < len(s) and s[i + 1] == "(":
            return i
    return None


def as_ratfunc(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    if isinstance(x, (int, Fraction)):
        return RationalFunction(Poly([x]))
    raise TypeError(f"cannot coerce {x!r} to a rational function")


def ratfunc_derivative(f: RationalFunction) -> RationalFunction:
    n, d = f.num, f.den
    return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)


# --------------------------------------------------------------------------
# matrices over Q(t)


class RatFuncMatrix:
    __slots__ = ("entries",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = [[as_ratfunc(x) for x in r] for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix must be rectangular and nonempty")
        self.entries: Tuple[Tuple[RationalFunction, ...], ...] = tuple(tuple(r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "RatFuncMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, items: Sequence) -> "RatFuncMatrix":
        n = len(items)
        return cls([[items[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> List[RationalFunction]:
        return list(self.entries[i])

    def col(self, j: int) -> List[RationalFunction]:
        return [r[j] for r in self.entries]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFuncMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "RatFuncMatrix") -> "RatFuncMatrix":
        return RatFuncMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatFuncMatrix") -> "RatFuncMatrix":
        return RatFuncMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return RatFuncMatrix([[-a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, RatFuncMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = RationalFunction(Poly())
                    for k in range(self.cols):
                        a, b = self.entries[i][k], other.entries[k][j]
                        if not a.is_zero() and not b.is_zero():
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return RatFuncMatrix(out)
        s = as_ratfunc(other)
        return RatFuncMatrix([[a * s for a in r] for r in self.entries])

    def __rmul__(self, other):
        s = as_ratfunc(other)
        return RatFuncMatrix([[s * a for a in r] for r in self.entries])

    def transpose(self) -> "RatFuncMatrix":
        return RatFuncMatrix([list(c) for c in zip(*self.entries)])

    def derivative(self) -> "RatFuncMatrix":
        return RatFuncMatrix([[ratfunc_derivative(a) for a in r] for r in self.entries])

    def compose(self, inner: Poly) -> "RatFuncMatrix":
        return RatFuncMatrix([[a.compose(inner) for a in r] for r in self.entries])

    def apply_row(self, v: Sequence[RationalFunction]) -> List[RationalFunction]:
        """Row vector times matrix."""
        out = []
        for j in range(self.cols):
            acc = RationalFunction(Poly())
            for k in range(self.rows):
                if not v[k].is_zero() and not self.entries[k][j].is_zero():
                    acc = acc + v[k] * self.entries[k][j]
            out.append(acc)
        return out

    def inverse(self) -> "RatFuncMatrix":
        """Gauss-Jordan over Q(t)."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.entries[i]) + [as_ratfunc(1 if i == j else 0) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular over Q(t)")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = aug[col][col].inverse()
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero():
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return RatFuncMatrix([row[n:] for row in aug])

    def common_denominator(self) -> Poly:
        return reduce(poly_lcm, (a.den for r in self.entries for a in r), Poly([1]))

    def to_text(self, var: str = "t") -> str:
        return "\n".join("[" + ", ".join(a.to_text(var) for a in r) + "]" for r in self.entries)

    def __repr__(self):
        return f"RatFuncMatrix(\n{self.to_text()}\n)"


# --------------------------------------------------------------------------
# linear dependency over Q(t)


def _clear_vector(v: Sequence[RationalFunction]) -> List[Poly]:
    """Scale a vector of rational functions to coprime polynomial entries."""
    den = reduce(poly_lcm, (x.den for x in v), Poly([1]))
    polys = [x.num * den.exact_div(x.den) for x in v]
    return polys


def _row_primitive(row: List[Poly]) -> List[Poly]:
    nz = [p for p in row if not p.is_zero()]
    if not nz:
        return row
    g = reduce(poly_gcd, nz)
    cont = reduce(math.gcd, (c.numerator for p in nz for c in p.coeffs))
    den = reduce(math.lcm, (c.denominator for p in nz for c in p.coeffs))
    scale = Fraction(den, cont)
    if g.degree > 0:
        row = [p.exact_div(g) if not p.is_zero() else p for p in row]
        nz = [p for p in row if not p.is_zero()]
        cont = reduce(math.gcd, (c.numerator for p in nz for c in p.coeffs))
        den = reduce(math.lcm, (c.denominator for p in nz for c in p.coeffs))
        scale = Fraction(den, cont)
    return [p.scale(scale) for p in row]


def _nullspace_vector(columns: List[List[Poly]]) -> Optional[List[RationalFunction]]:
    """Kernel vector of the matrix whose columns are given, if the last column
    is dependent on the others and the others are independent."""
    ncols = len(columns)
    nrows = len(columns[0])
    # row-major polynomial matrix
    m = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                q = m[i][c]
                g = poly_gcd(p, q)
                pp, qq = p.exact_div(g), q.exact_div(g)
                m[i] = _row_primitive([x * pp - y * qq for x, y in zip(m[i], m[r])])
        m[r] = _row_primitive(m[r])
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    sol = [RationalFunction(Poly()) for _ in range(ncols)]
    sol[f] = RationalFunction(Poly([1]))
    for row_idx, c in enumerate(pivots):
        if c > f:
            continue
        sol[c] = -RationalFunction(m[row_idx][f], m[row_idx][c])
    return sol


def linear_dependency(vectors: Sequence[Sequence]) -> Optional[List[RationalFunction]]:
    """Shortest prefix dependency among the vectors over Q(t).

    Returns coefficients (c_0, ..., c_k) with sum c_i v_i = 0 and c_k = 1,
    where k is the first index at which v_0..v_k become dependent; ``None``
    when the whole family is independent.
    """
    if not vectors:
        return None
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise ValueError("vectors must share a dimension")
    cleared = [_clear_vector([as_ratfunc(x) for x in v]) for v in vectors]
    for k in range(len(cleared)):
        if all(p.is_zero() for p in cleared[k]):
            sol = [RationalFunction(Poly()) for _ in range(k + 1)]
            sol[k] = RationalFunction(Poly([1]))
            return sol
        if k == 0:
            continue
        ns = _nullspace_vector(cleared[: k + 1])
        if ns is None:
            continue
        # rescale back to the un-cleared vectors
        out = []
        for i, c in enumerate(ns):
            v = [as_ratfunc(x) for x in vectors[i]]
            j = next(idx for idx, x in enumerate(cleared[i]) if not x.is_zero())
            ratio = RationalFunction(cleared[i][j]) / v[j]
            out.append(c * ratio)
        last = out[k]
        out = [c / last for c in out]
        return out
    return None


# --------------------------------------------------------------------------
# numeric roots


def poly_roots_numeric(p: Poly, ctx: PrecisionCtx) -> List:
    """All complex roots with multiplicity.

    Each squarefree factor is solved with mpmath's Durand-Kerner iteration at
    raised precision, then checked against a residual bound.
    """
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    roots: List = []
    with ctx.work():
        for factor, mult in p.squarefree_decomposition():
            if factor.degree == 1:
                r = -to_mp(factor[0]) / to_mp(factor[1])
                roots.extend([mpmath.mpc(r)] * mult)
                continue
            coeffs = [to_mp(c) for c in reversed(factor.coeffs)]
            try:
                rs = mpmath.polyroots(coeffs, maxsteps=200 + 4 * ctx.bits, extraprec=ctx.bits + 20)
            except mpmath.libmp.NoConvergence as exc:
                raise IterationDivergence(str(exc)) from exc
            norm = max(abs(c) for c in coeffs)
            bound = mpmath.ldexp(norm, -ctx.bits // 2)
            for r in rs:
                r = mpmath.mpc(r)
                if abs(factor.eval_mp(r)) > bound * max(1, abs(r)) ** factor.degree:
                    raise IterationDivergence(f"root residual too large at {r}")
                roots.extend([r] * mult)
    return roots


# --------------------------------------------------------------------------
# real quadratic and imaginary quadratic numbers a + b*sqrt(d)


def squarefree_part(n: int) -> Tuple[int, int]:
    """Write n = s^2 * f with f squarefree; returns (s, f).  The sign stays in f.

    Trial division up to 10^6; a leftover cofactor is tested for being a
    perfect square and otherwise assumed squarefree.
    """
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, f = 1, 1
    p = 2
    while p * p <= n and p < 10**6:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        s *= r
    else:
        f *= n
    return s, sign * f


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b*sqrt(d) with rational a, b and squarefree integer d != 1."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b == 0:
            object.__setattr__(self, "d", 0)
        elif self.d in (0, 1) or squarefree_part(self.d)[0] != 1:
            raise ValueError(f"d must be squarefree and not 0 or 1, got {self.d}")

    @classmethod
    def sqrt(cls, r) -> "QuadraticNumber":
        """Exact square root of a rational; an element of Q or of Q(sqrt(d))."""
        r = Fraction(r)
        if r == 0:
            return cls(Fraction(0))
        num = r.numerator * r.denominator
        s, f = squarefree_part(num)
        coeff = Fraction(s, r.denominator)
        if f == 1:
            return cls(coeff)
        return cls(Fraction(0), coeff, f)

    @staticmethod
    def coerce(x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        return QuadraticNumber(Fraction(x))

    def _field(self, other: "QuadraticNumber") -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError("numbers from different quadratic fields")
        return self.d or other.d

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other):
        o = QuadraticNumber.coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-QuadraticNumber.coerce(other))

    def __rsub__(self, other):
        return QuadraticNumber.coerce(other) - self

    def __mul__(self, other):
        o = QuadraticNumber.coerce(other)
        d = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadraticNumber(c.a / n, c.b / n, self.d)

    def __truediv__(self, other):
        return self * QuadraticNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadraticNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadraticNumber(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            o = QuadraticNumber.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.d == o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else 0))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def to_mp(self):
        if self.b == 0:
            return to_mp(self.a)
        return to_mp(self.a) + to_mp(self.b) * mpmath.sqrt(self.d)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt({self.d})"


# --------------------------------------------------------------------------
# cyclotomic fields Q(zeta_n) and pure extensions K[y]/(y^n - R)


_CYCLO_CACHE = {}


def cyclotomic_polynomial(n: int) -> Poly:
    if n < 1:
        raise ValueError("n must be positive")
    if n not in _CYCLO_CACHE:
        p = Poly([-1] + [0] * (n - 1) + [1])
        for d in _divisors(n):
            if d < n:
                p = p.exact_div(cyclotomic_polynomial(d))
        _CYCLO_CACHE[n] = p
    return _CYCLO_CACHE[n]


class CyclotomicField:
    """Q(zeta_n), zeta_n = exp(2 pi i / n); n = 1 gives Q."""

    def __init__(self, n: int):
        self.n = n
        self.phi = cyclotomic_polynomial(n)

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self):
        return hash(("cyclo", self.n))

    def __call__(self, c) -> "CycloNumber":
        if isinstance(c, CycloNumber):
            return c
        return CycloNumber(self, Poly.const(c))

    def zeta(self, power: int = 1) -> "CycloNumber":
        return CycloNumber(self, Poly([0, 1])) ** power if self.n > 1 else self(1)

    def zero(self) -> "CycloNumber":
        return self(0)

    def one(self) -> "CycloNumber":
        return self(1)


class CycloNumber:
    __slots__ = ("field", "poly")

    def __init__(self, field: CyclotomicField, poly: Poly):
        self.field = field
        self.poly = poly.divmod(field.phi)[1] if poly.degree >= field.phi.degree else poly

    def _lift(self, other) -> "CycloNumber":
        if isinstance(other, CycloNumber):
            if other.field != self.field:
                raise ValueError("different cyclotomic fields")
            return other
        return self.field(other)

    def __add__(self, other):
        return CycloNumber(self.field, self.poly + self._lift(other).poly)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.field, -self.poly)

    def __sub__(self, other):
        return CycloNumber(self.field, self.poly - self._lift(other).poly)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return CycloNumber(self.field, self.poly * self._lift(other).poly)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, s, _ = poly_xgcd(self.poly, self.field.phi)
        return CycloNumber(self.field, s.scale(1 / g[0]))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree <= 0

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.poly[0] if not self.poly.is_zero() else Fraction(0)

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field.n, self.poly.coeffs))

    def to_mp(self):
        z = mpmath.expjpi(mpmath.mpf(2) / self.field.n)
        return mpmath.polyval([to_mp(c) for c in reversed(self.poly.coeffs)] or [0], z)

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.rational_value())
        return self.poly.to_compact(f"zeta{self.field.n}")

    __repr__ = __str__


class PureExtension:
    """The ring K[y]/(y^n - R) for a cyclotomic field K and R in K."""

    def __init__(self, base: CyclotomicField, n: int, R):
        if n < 1:
            raise ValueError("n must be positive")
        self.base = base
        self.n = n
        self.R = base(R)

    def __call__(self, c) -> "PureElement":
        if isinstance(c, PureElement):
            return c
        return PureElement(self, (self.base(c),) + (self.base.zero(),) * (self.n - 1))

    def gen(self) -> "PureElement":
        if self.n == 1:
            return self(self.R)
        coeffs = [self.base.zero()] * self.n
        coeffs[1] = self.base.one()
        return PureElement(self, tuple(coeffs))


class PureElement:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PureExtension, coeffs):
        self.ring = ring
        self.coeffs = tuple(coeffs)

    def _lift(self, other) -> "PureElement":
        if isinstance(other, PureElement):
            if other.ring is not self.ring:
                raise ValueError("elements of different rings")
            return other
        return self.ring(other)

    def __add__(self, other):
        o = self._lift(other)
        return PureElement(self.ring, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return PureElement(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        n = self.ring.n
        out = [self.ring.base.zero()] * n
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if b.is_zero():
                    continue
                k = i + j
                term = a * b
                if k >= n:
                    k -= n
                    term = term * self.ring.R
                out[k] = out[k] + term
        return PureElement(self.ring, out)

    __rmul__ = __mul__

    def inverse(self) -> "PureElement":
        """Solve self * v = 1 by elimination on the multiplication matrix."""
        n = self.ring.n
        cols = []
        basis = self.ring(1)
        g = self.ring.gen() if n > 1 else None
        for _ in range(n):
            cols.append((self * basis).coeffs)
            if g is not None:
                basis = basis * g
        zero, one = self.ring.base.zero(), self.ring.base.one()
        # augmented rows: M[i][j] = cols[j][i]
        M = [[cols[j][i] for j in range(n)] + [one if i == 0 else zero] for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("element is a zero divisor")
            M[c], M[piv] = M[piv], M[c]
            inv = M[c][c].inverse()
            M[c] = [v * inv for v in M[c]]
            for r in range(n):
                if r != c and not M[r][c].is_zero():
                    f = M[r][c]
                    M[r] = [v - f * w for v, w in zip(M[r], M[c])]
        return PureElement(self.ring, [M[i][n] for i in range(n)])

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.ring(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def in_base(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def __eq__(self, other):
        try:
            return (self - other).is_zero()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(hash(c) for c in self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__
