"""Catalog of cubic fourfold families, their Picard-Fuchs data and critical values.

The records live in ``data/catalog.txt`` and are parsed on first use.  The
critical values of f are computed independently of the stored ODEs, by exact
elimination on the gradient system, so that the singular loci of the ODEs can
be checked against the geometry.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .errors import ParseError, RecipeUnavailable, UnknownFamily
from .exact_algebra import Poly, QuadraticNumber, RatFuncMatrix, RationalFunction, parse_poly, poly_gcd
from .numerics import PrecisionCtx, to_mpc
from .ode_engine import FirstOrderSystem, ScalarODE, apparent_singularity_test, system_to_scalar

CATALOG_FORMAT = 1
FAMILY_NAMES = (
    "cubic5-x1-x2",
    "cubic5-x1x2",
    "cubic5-x1sq-x2sq",
    "cubic5-x1sq-x1x2",
    "cubic5-x1sq-x1",
    "cubic5-x1-x1x2",
)


# --------------------------------------------------------------------------
# stanza parsing


_HEADER = re.compile(r"^\[(family|map)\s+([^\]]+)\]$")
_KEY = re.compile(r"^([\w-]+)(?:\[([^\]]+)\])?\s*:\s*(.*)$")


@dataclass
class Stanza:
    kind: str
    name: str
    fields: Dict[str, List[str]] = field(default_factory=dict)
    labelled: Dict[str, Dict[str, str]] = field(default_factory=dict)

    def one(self, key: str, default: Optional[str] = None) -> Optional[str]:
        vals = self.fields.get(key)
        if not vals:
            return default
        if len(vals) > 1:
            raise ParseError(f"{self.kind} {self.name}: key {key!r} given more than once")
        return vals[0]


def parse_stanzas(text: str) -> Tuple[int, List[Stanza]]:
    version = None
    out: List[Stanza] = []
    cur: Optional[Stanza] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            cur = Stanza(m.group(1), m.group(2).strip())
            out.append(cur)
            continue
        m = _KEY.match(line)
        if not m:
            raise ParseError(f"catalog line {lineno}: cannot parse {raw!r}")
        key, label, value = m.group(1), m.group(2), m.group(3).strip()
        if cur is None:
            if key != "format":
                raise ParseError(f"catalog line {lineno}: {key!r} outside a stanza")
            version = int(value)
            continue
        if label is not None:
            slot = cur.labelled.setdefault(key, {})
            if label in slot:
                raise ParseError(f"catalog line {lineno}: duplicate {key}[{label}]")
            slot[label] = value
        else:
            cur.fields.setdefault(key, []).append(value)
    if version != CATALOG_FORMAT:
        raise ParseError(f"unsupported catalog format {version!r}")
    return version, out


def catalog_text() -> str:
    return resources.files("periodlab").joinpath("data/catalog.txt").read_text(encoding="utf-8")


# --------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class FamilyRecord:
    name: str
    f: str
    recipe: str
    singular_locus: Poly
    singular_locus_source: str
    printed_odes: Tuple[Tuple[str, Tuple[Poly, ...]], ...]
    frame: Tuple[str, ...] = ()
    matrix: Optional[RatFuncMatrix] = None
    derivations: Tuple[Tuple[str, str], ...] = ()
    derivative_pairs: Tuple[Tuple[str, str], ...] = ()
    leading_factored: Tuple[Tuple[str, str], ...] = ()
    apparent: Tuple[str, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def labels(self) -> List[str]:
        return [lab for lab, _ in self.printed_odes]

    def ode(self, label: str) -> ScalarODE:
        key = normalize_label(label)
        for lab, coeffs in self.printed_odes:
            if lab == key:
                return ScalarODE(coeffs)
        raise UnknownFamily(f"family {self.name} has no ODE for {label!r}; known: {', '.join(self.labels)}")

    @property
    def odes(self) -> Dict[str, ScalarODE]:
        return {lab: ScalarODE(c) for lab, c in self.printed_odes}

    def system(self) -> Optional[FirstOrderSystem]:
        return None if self.matrix is None else FirstOrderSystem(self.matrix)

    def seed_for(self, label: str) -> List:
        """Row vector r with (form) = r . omega in the stored frame."""
        key = normalize_label(label)
        how = dict(self.derivations).get(key)
        if how is None or self.matrix is None:
            raise UnknownFamily(f"{label!r} is not derivable from the frame of {self.name}")
        kind, form = how.split()
        idx = self.frame.index(form)
        if kind == "form":
            return [1 if j == idx else 0 for j in range(len(self.frame))]
        if kind == "nabla":
            return self.matrix.row(idx)
        raise ParseError(f"unknown derivation {how!r}")


def normalize_label(label: str) -> str:
    """Map display labels such as "∇ω0" or "ω_{12}" onto catalog keys."""
    s = label.strip()
    s = s.translate(str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789"))
    s = s.replace("∇", "nabla-").replace("ω", "omega").replace("{", "").replace("}", "")
    s = re.sub(r"^nabla\s*-?\s*", "nabla-", s)
    s = re.sub(r"omega_(\d+)$", r"omega\1", s)
    return s


def _record(st: Stanza) -> FamilyRecord:
    def need(key):
        v = st.one(key)
        if v is None:
            raise ParseError(f"family {st.name}: missing {key!r}")
        return v

    odes = []
    for label, text in st.labelled.get("ode", {}).items():
        polys = tuple(parse_poly(c.strip(), "t") for c in text.split(";"))
        odes.append((label, polys))
    rows = st.fields.get("matrix-row", [])
    matrix = None
    if rows:
        den = RationalFunction(parse_poly(need("matrix-denominator"), "t"))
        matrix = RatFuncMatrix([[RationalFunction(parse_poly(c.strip(), "t")) / den for c in r.split(";")] for r in rows])
    frame = tuple(p.strip() for p in st.one("frame", "").split(",") if p.strip())
    if matrix is not None and len(frame) != matrix.rows:
        raise ParseError(f"family {st.name}: frame and matrix sizes differ")
    return FamilyRecord(
        name=st.name,
        f=need("f"),
        recipe=need("recipe"),
        singular_locus=parse_poly(need("singular-locus"), "t"),
        singular_locus_source=st.one("singular-locus-source", "stated"),
        printed_odes=tuple(odes),
        frame=frame,
        matrix=matrix,
        derivations=tuple(st.labelled.get("derive", {}).items()),
        derivative_pairs=tuple(st.labelled.get("derivative", {}).items()),
        leading_factored=tuple(st.labelled.get("leading-factored", {}).items()),
        apparent=tuple(st.fields.get("apparent", [])),
        notes=tuple(st.fields.get("note", [])),
    )


@lru_cache(maxsize=1)
def _load() -> Tuple[Dict[str, FamilyRecord], Tuple[Stanza, ...]]:
    _, stanzas = parse_stanzas(catalog_text())
    fams = {st.name: _record(st) for st in stanzas if st.kind == "family"}
    maps = tuple(st for st in stanzas if st.kind == "map")
    return fams, maps


def catalog_names() -> List[str]:
    return list(_load()[0])


def catalog_get(name: str) -> FamilyRecord:
    fams = _load()[0]
    if name not in fams:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(fams)}")
    return fams[name]


def map_specs(group: Optional[str] = None, item: Optional[int] = None):
    """AlgebraicMapSpec objects from the catalog, filtered by group and item."""
    from .curve_family import AlgebraicMapSpec

    out = []
    for st in _load()[1]:
        flat = {k: v[0] for k, v in st.fields.items()}
        if group is not None and flat.get("group") != group:
            continue
        if item is not None and flat.get("item") != str(item):
            continue
        out.append(AlgebraicMapSpec.from_stanza(st.name, flat))
    return out


def map_spec(name: str):
    for spec in map_specs():
        if spec.name == name:
            return spec
    raise UnknownFamily(f"unknown map {name!r}")


# --------------------------------------------------------------------------
# polynomials in x1..x5, just enough for gradients and substitution


class MPoly:
    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Dict[Tuple[int, ...], Fraction], nvars: int):
        self.terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        self.nvars = nvars

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    def _lift(self, o) -> "MPoly":
        return o if isinstance(o, MPoly) else MPoly.const(o, self.nvars)

    def __add__(self, o):
        o = self._lift(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return MPoly(t, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        t: Dict[Tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(t, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if len(o.terms) != 1 or any(next(iter(o.terms))):
            raise ParseError("only division by constants is supported in f")
        c = next(iter(o.terms.values()))
        return MPoly({e: v / c for e, v in self.terms.items()}, self.nvars)

    def __eq__(self, o):
        return isinstance(o, MPoly) and self.terms == o.terms

    def diff(self, i: int) -> "MPoly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return MPoly(t, self.nvars)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def drop(self, idx: Sequence[int]) -> "MPoly":
        """Terms free of the variables in idx."""
        return MPoly({e: c for e, c in self.terms.items() if not any(e[i] for i in idx)}, self.nvars)

    def substitute(self, values: Sequence) -> object:
        """Evaluate with values[i] for variable i (values from any ring)."""
        acc = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            acc = term if acc is None else acc + term
        return 0 if acc is None else acc


def parse_f(text: str, nvars: int = 5) -> MPoly:
    from .curve_family import evaluate_formula

    env = {f"x{i + 1}": MPoly.var(i, nvars) for i in range(nvars)}
    return evaluate_formula(text, env, lambda c: MPoly.const(c, nvars))


def _as_poly(v) -> Poly:
    return v if isinstance(v, Poly) else Poly.const(v)


# --------------------------------------------------------------------------
# critical values


def _squarefree(p: Poly) -> Poly:
    out = Poly([1])
    for fac, _ in p.squarefree_decomposition():
        out = out * fac
    return out


def _mult_matrix(h: Poly, modulus: Poly) -> List[List[Fraction]]:
    """Matrix of multiplication by h on Q[x]/(modulus), basis 1, x, ..."""
    n = modulus.degree
    cols = []
    for j in range(n):
        r = (h * Poly([0] * j + [1])) % modulus
        cols.append([r[i] for i in range(n)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _kron_sum(A: List[List[Fraction]], B: List[List[Fraction]]) -> List[List[Fraction]]:
    n, m = len(A), len(B)
    out = [[Fraction(0)] * (n * m) for _ in range(n * m)]
    for i in range(n):
        for k in range(m):
            for j in range(n):
                for l in range(m):
                    v = Fraction(0)
                    if k == l:
                        v += A[i][j]
                    if i == j:
                        v += B[k][l]
                    out[i * m + k][j * m + l] = v
    return out


def charpoly(M: List[List[Fraction]]) -> Poly:
    """det(t I - M) by Faddeev-LeVerrier over Q."""
    n = len(M)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prev = [[Mk[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][l] * prev[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(Mk[i][i] for i in range(n)) / k
    return Poly(coeffs)


@dataclass
class CriticalValue:
    value: object  # mpc
    exact: object = None  # Fraction or QuadraticNumber where available
    tag: str = ""


@dataclass
class CriticalValueSet:
    family: str
    polynomial: Poly  # primitive squarefree polynomial whose roots are the critical values
    method: str
    values: List[CriticalValue]
    points: List[Tuple]
    gradient_residual: object
    precision_bits: int

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "family": self.family,
            "polynomial": self.polynomial.to_compact("t"),
            "method": self.method,
            "values": [{"value": mpmath.nstr(v.value.real if v.value.imag == 0 else v.value, digits), "tag": v.tag} for v in self.values],
            "gradient_residual": mpmath.nstr(self.gradient_residual, 5),
            "precision_bits": self.precision_bits,
        }


def _reduced_part(rec: FamilyRecord) -> MPoly:
    f = parse_f(rec.f)
    for i in (2, 3, 4):
        g = f.diff(i)
        expect = MPoly.var(i, 5) * MPoly.var(i, 5) * 3
        if g != expect:
            raise RecipeUnavailable(f"{rec.name}: x{i + 1} does not decouple as x^3")
    return f.drop((2, 3, 4))


def _univariate(h: MPoly, i: int) -> Poly:
    vals: List[object] = [Poly([0])] * 5
    vals[i] = Poly([0, 1])
    return _as_poly(h.substitute(vals))


def _exact_tags(p: Poly) -> Dict[object, Tuple[object, str]]:
    """Closed forms for rational and quadratic factors, keyed by numeric value."""
    tags = {}
    rest = p
    for r in p.rational_roots():
        tags[complex(r)] = (r, str(r))
        rest = rest.exact_div(Poly([-r, 1]))
    if rest.degree == 2:
        a, b, c = rest[2], rest[1], rest[0]
        disc = b * b - 4 * a * c
        if disc > 0:
            root = QuadraticNumber.sqrt(disc)
            for s in (1, -1):
                q = QuadraticNumber(-b / (2 * a) + s * root.a / (2 * a), s * root.b / (2 * a), root.d)
                tags[complex(float(q.a) + float(q.b) * math.sqrt(q.d))] = (q, str(q))
    return tags


def critical_values(name: str, ctx: PrecisionCtx) -> CriticalValueSet:
    """All finite critical values of f, exactly as roots of a polynomial and numerically.

    x3, x4, x5 drop out (3 x_i^2 = 0).  For the remaining pair the recipe is
    either separable, h = h1(x1) + h2(x2), or elimination of x2 through the
    gradient equation that is linear in it; in the latter case the substituted
    second equation is the resultant with respect to x2.  The critical-value
    polynomial is the characteristic polynomial of multiplication by h on the
    coordinate ring of the critical scheme, made squarefree.
    """
    rec = catalog_get(name)
    h = _reduced_part(rec)
    mixed = any(e[0] and e[1] for e in h.terms)
    if rec.recipe == "separable":
        if mixed:
            raise RecipeUnavailable(f"{name}: recipe says separable but f couples x1 and x2")
        parts = []
        for i in (0, 1):
            hi = _univariate(h.drop((1 - i,)) - h.drop((0, 1)) * Fraction(1, 2), i)
            si = _squarefree(hi.derivative())
            parts.append((hi, si))
        M = _kron_sum(_mult_matrix(parts[0][0], parts[0][1]), _mult_matrix(parts[1][0], parts[1][1]))
        method = "separable"
    elif rec.recipe.startswith("eliminate"):
        var = rec.recipe.split()[1]
        j = int(var[1:]) - 1
        i = 1 - j
        grads = [h.diff(0), h.diff(1)]
        lin = None
        for g in grads:
            # c * x_j + q(x_i) with c constant
            xj_terms = {e: c for e, c in g.terms.items() if e[j]}
            if len(xj_terms) == 1:
                (e, c), = xj_terms.items()
                if e[j] == 1 and sum(e) == 1:
                    lin = (g, c)
                    break
        if lin is None:
            raise RecipeUnavailable(f"{name}: no gradient equation is linear in {var}")
        g, c = lin
        other = grads[1] if g is grads[0] else grads[0]
        q = _univariate(g - MPoly.var(j, 5) * c, i)
        sub = -q.scale(1 / c)
        vals: List[object] = [Poly([0])] * 5
        vals[i] = Poly([0, 1])
        vals[j] = sub
        P = _squarefree(_as_poly(other.substitute(vals)))
        H = _as_poly(h.substitute(vals)) % P
        M = _mult_matrix(H, P)
        parts = [(sub, P)]
        method = f"eliminate {var}"
    else:
        raise RecipeUnavailable(f"{name}: unknown recipe {rec.recipe!r}")
    poly = _squarefree(charpoly(M)).primitive()
    if poly.lc < 0:
        poly = -poly

    with ctx.work():
        tol = mpmath.ldexp(1, -ctx.bits // 2)
        g1, g2 = h.diff(0), h.diff(1)
        if method == "separable":
            r1 = _roots(parts[0][1], ctx)
            r2 = _roots(parts[1][1], ctx)
            points = [(a, b) for a in r1 for b in r2]
        else:
            sub, P = parts[0]
            points = []
            for r in _roots(P, ctx):
                pt = [0, 0]
                pt[i] = r
                pt[j] = sub.eval_mp(r)
                points.append(tuple(pt))
        resid = mpmath.mpf(0)
        raw = []
        for a, b in points:
            v = [a, b, 0, 0, 0]
            resid = max(resid, abs(g1.substitute(v)), abs(g2.substitute(v)))
            raw.append(mpmath.mpc(h.substitute(v)))
        if resid > tol:
            raise RecipeUnavailable(f"{name}: gradient residual {mpmath.nstr(resid, 5)} too large")
        tags = _exact_tags(poly)
        values: List[CriticalValue] = []
        for r in _roots(poly, ctx):
            if not any(abs(r - w) < tol * max(1, abs(r)) for w in raw):
                raise RecipeUnavailable(f"{name}: root {mpmath.nstr(r, 10)} is not a critical value")
            ex, tag = None, f"root of {poly.to_compact('t')}"
            for key, (e, txt) in tags.items():
                if abs(complex(r) - key) < 1e-9:
                    ex, tag = e, txt
            values.append(CriticalValue(r, ex, tag))
        values.sort(key=lambda cv: (float(cv.value.real), float(cv.value.imag)))
    return CriticalValueSet(name, poly, method, values, points, resid, ctx.bits)


def _roots(p: Poly, ctx: PrecisionCtx) -> List:
    """Numeric roots at ctx precision (the working precision is set here)."""
    if p.degree < 1:
        return []
    with ctx.work():
        if p.degree == 1:
            r = -(mpmath.mpf(p[0].numerator) / p[0].denominator) / (mpmath.mpf(p[1].numerator) / p[1].denominator)
            return [mpmath.mpc(r)]
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        rs = mpmath.polyroots(cs, maxsteps=400, extraprec=2 * ctx.bits)
        out = []
        for r in rs:
            r = mpmath.mpc(r)
            if abs(r.imag) < mpmath.ldexp(1, -ctx.bits + 16) * max(1, abs(r)):
                r = mpmath.mpc(r.real, 0)
            out.append(r)
    return out


# --------------------------------------------------------------------------
# consistency of critical values and singular loci


@dataclass
class LeadingCheck:
    label: str
    leading: Poly
    contains_criticals: bool
    max_relative_value: object
    leftover: Poly
    apparent: List[dict]


@dataclass
class ConsistencyReport:
    family: str
    critical_polynomial: Poly
    stated_locus_matches: bool
    checks: List[LeadingCheck]
    expected_apparent: Tuple[str, ...]
    expected_apparent_found: bool
    derivative_checks: List[dict]

    @property
    def passed(self) -> bool:
        ok = self.stated_locus_matches and self.expected_apparent_found
        for c in self.checks:
            ok = ok and c.contains_criticals and all(a["verdict"] == "apparent" for a in c.apparent)
        return ok

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "critical_polynomial": self.critical_polynomial.to_compact("t"),
            "stated_locus_matches": self.stated_locus_matches,
            "passed": self.passed,
            "expected_apparent": list(self.expected_apparent),
            "expected_apparent_found": self.expected_apparent_found,
            "checks": [
                {
                    "label": c.label,
                    "leading": c.leading.to_compact("t"),
                    "contains_criticals": c.contains_criticals,
                    "max_relative_value": mpmath.nstr(c.max_relative_value, 5),
                    "leftover": c.leftover.to_compact("t"),
                    "apparent": c.apparent,
                }
                for c in self.checks
            ],
            "derivative_checks": self.derivative_checks,
        }


def derivative_equation(ode: ScalarODE) -> ScalarODE:
    """Minimal equation of y' for solutions y of ode."""
    return system_to_scalar(ode.companion(), 1)


def singular_locus_consistency(name: str, ctx: PrecisionCtx, run_apparent: bool = True) -> ConsistencyReport:
    """Check S (critical values) against S' (roots of every stored leading coefficient).

    Leftover roots of a leading coefficient are apparent candidates and get
    the exponent and monodromy tests when the equation has order <= 3.
    """
    rec = catalog_get(name)
    crit = critical_values(name, ctx)
    cp = crit.polynomial
    stated = rec.singular_locus.primitive()
    stated_ok = stated.monic() == cp.monic() if rec.singular_locus_source == "stated" else (poly_gcd(stated, cp).monic() == cp.monic())
    checks: List[LeadingCheck] = []
    leftover_roots_seen: List = []
    items = [(lab, ScalarODE(c)) for lab, c in rec.printed_odes]
    for label, ode in items:
        L = ode.leading
        sq = _squarefree(L)
        contains = (sq % cp).is_zero()
        with ctx.work():
            scale = max(abs(mpmath.mpf(c.numerator) / c.denominator) for c in L.coeffs)
            worst = mpmath.mpf(0)
            for cv in crit.values:
                v = cv.value
                worst = max(worst, abs(L.eval_mp(v)) / (scale * max(1, abs(v)) ** L.degree))
            contains = contains and worst < mpmath.mpf(10) ** (-(ctx.digits - 10))
        left = sq.exact_div(poly_gcd(sq, cp)).primitive() if contains else sq
        if left.lc < 0:
            left = -left
        apparent = []
        if left.degree >= 1 and run_apparent and ode.order <= 3:
            rats = left.rational_roots()
            rest = left
            for r in rats:
                rest = rest.exact_div(Poly([-r, 1]))
                v = apparent_singularity_test(ode, r, ctx)
                apparent.append(_verdict_dict(v, str(r), ctx))
                leftover_roots_seen.append(complex(r))
            if rest.degree >= 1:
                for r in _roots(rest, ctx):
                    v = apparent_singularity_test(ode, (rest, r), ctx)
                    apparent.append(_verdict_dict(v, f"root of {rest.primitive().to_compact('t')}", ctx, r))
                    leftover_roots_seen.append(complex(r))
        elif left.degree >= 1:
            apparent.append({"point": left.to_compact("t"), "verdict": "untested", "reason": "order > 3"})
        checks.append(LeadingCheck(label, L, contains, worst, left, apparent))
    found = True
    for text in rec.apparent:
        p = parse_poly(text, "t") if "t" in text else Poly([-Fraction(text), 1])
        for r in p.rational_roots() or []:
            found = found and any(abs(complex(r) - s) < 1e-12 for s in leftover_roots_seen)
        if not p.rational_roots():
            with ctx.work():
                for r in _roots(p, ctx):
                    found = found and any(abs(complex(r) - s) < 1e-12 for s in leftover_roots_seen)
    deriv = []
    for target, source in rec.derivative_pairs:
        computed = derivative_equation(rec.ode(source))
        printed = rec.ode(target)
        deriv.append({
            "form": target,
            "from": source,
            "printed": printed.to_display_string(),
            "derived": computed.to_display_string(),
            "agrees": computed == ScalarODE.normalized(printed.coefficients),
        })
    return ConsistencyReport(name, cp, stated_ok, checks, rec.apparent, found, deriv)


def _verdict_dict(v, label: str, ctx: PrecisionCtx, numeric=None) -> dict:
    with ctx.work():
        out = {
            "point": label,
            "verdict": v.verdict,
            "exponents": [str(e) if isinstance(e, Fraction) else mpmath.nstr(e, 10) for e in v.exponents],
            "monodromy_deviation": mpmath.nstr(v.monodromy_deviation, 5),
        }
        if numeric is not None:
            out["value"] = mpmath.nstr(numeric, 20)
    return out


# --------------------------------------------------------------------------
# frame derivations


def derive_form_ode(name: str, label: str) -> ScalarODE:
    """Cyclic-vector scalar equation for a form expressed in the stored frame."""
    rec = catalog_get(name)
    system = rec.system()
    if system is None:
        raise UnknownFamily(f"family {name} has no stored Gauss-Manin matrix")
    return system_to_scalar(system, rec.seed_for(label))
