"""Command-line front end: ``periodlab <command> ...``.

Every command builds a JSON-ready envelope
``{"status", "op", "inputs", "result", "certified_digits", "precision_bits", "bounds"}``;
``--json`` prints it, otherwise a short text rendering is printed.  Exit codes:
0 ok, 2 violated precondition, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import mpmath

from . import algebraicity as alg
from .curve_family import (
    differential_pullback_residual,
    identity_residual,
    period_matrix_compare,
    regular_rational_points,
    superelliptic_genus,
)
from .elliptic import cm_detect, periods
from .errors import PeriodLabError, PreconditionError
from .family_catalog import catalog_get, derive_form_ode, map_specs, singular_locus_consistency
from .hodge_pipeline import fiber_input, footbal_check, lemmagamma_bridge, pullback_chain, theorem1_report
from .hypergeom import (
    HypergeomParams,
    hyp2f1,
    monodromy_closed_form,
    numeric_monodromy,
    schwarz_map,
)
from .numerics import PrecisionCtx, certify, to_mpc
from .ode_engine import loop_monodromy

DEFAULT_DIGITS = 50
LEMMA_ALIASES = {"22aug06": "hyperelliptic", "22aug": "elliptic-quotients"}


class Outcome:
    def __init__(self, result, certified_digits=None, bounds=None, text: Optional[str] = None):
        self.result = result
        self.certified_digits = certified_digits
        self.bounds = bounds or {}
        self.text = text


# --------------------------------------------------------------------------
# argument parsing helpers


def parse_number(text: str):
    """``P/Q`` gives a Fraction; ``RE,IM`` a complex pair of rationals; decimals stay exact."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return Fraction(parts[0])
    if len(parts) == 2:
        re_, im_ = Fraction(parts[0]), Fraction(parts[1])
        return re_ if im_ == 0 else (re_, im_)
    raise PreconditionError(f"cannot parse number {text!r}")


def _num_mp(x, ctx: PrecisionCtx):
    with ctx.work():
        if isinstance(x, tuple):
            return mpmath.mpc(to_mpc(x[0]).real, to_mpc(x[1]).real)
        return to_mpc(x)


def _exact_or_mp(x, ctx: PrecisionCtx):
    return x if isinstance(x, Fraction) else _num_mp(x, ctx)


_EXPR_NAMES = {
    "pi": lambda: mpmath.pi,
    "e": lambda: mpmath.e,
    "i": lambda: mpmath.mpc(0, 1),
    "j": lambda: mpmath.mpc(0, 1),
}
_EXPR_FUNCS = {
    "sqrt": mpmath.sqrt,
    "exp": mpmath.exp,
    "log": mpmath.log,
    "sin": mpmath.sin,
    "cos": mpmath.cos,
    "gamma": mpmath.gamma,
    "beta": mpmath.beta,
    "cbrt": mpmath.cbrt,
    "root": mpmath.root,
    "hyp2f1": mpmath.hyp2f1,
}


def expression_value(text: str) -> Callable[[PrecisionCtx], object]:
    """Numeric expression such as ``gamma(1/3)^3/pi^2`` as a precision-aware callable.

    Integer literals are exact, so ``1/3`` is evaluated at the working
    precision; only arithmetic, ``^``/``**`` and a fixed set of functions and
    constants are accepted.
    """
    tree = ast.parse(text.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return mpmath.mpf(Fraction(str(node.value)).numerator) / Fraction(str(node.value)).denominator
        if isinstance(node, ast.Name) and node.id in _EXPR_NAMES:
            return _EXPR_NAMES[node.id]()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            ops = {ast.Add: lambda: a + b, ast.Sub: lambda: a - b, ast.Mult: lambda: a * b,
                   ast.Div: lambda: a / b, ast.Pow: lambda: mpmath.power(a, b)}
            for k, f in ops.items():
                if isinstance(node.op, k):
                    return f()
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _EXPR_FUNCS and not node.keywords:
            return _EXPR_FUNCS[node.func.id](*[ev(a) for a in node.args])
        raise PreconditionError(f"unsupported expression element in {text!r}")

    ev_check = tree  # parsed once; evaluated per precision

    def value(ctx: PrecisionCtx):
        with ctx.work():
            # unary plus materialises lazy constants such as pi at this precision
            return +ev(ev_check)

    # fail early on bad syntax elements
    value(PrecisionCtx(64))
    return value


def _params(args) -> HypergeomParams:
    return HypergeomParams(Fraction(args.a), Fraction(args.b), Fraction(args.c))


def _fiber(args):
    return fiber_input(
        t=None if args.t is None else Fraction(args.t),
        z=None if args.z is None else Fraction(args.z),
        j=None if args.j is None else Fraction(args.j),
    )


def _s(x, digits: int = 30) -> str:
    if isinstance(x, mpmath.mpc) and x.imag == 0:
        x = x.real
    return mpmath.nstr(x, max(5, digits))


def _mat(M, digits: int) -> List[List[str]]:
    return [[_s(M[i, k], digits) for k in range(M.cols)] for i in range(M.rows)]


# --------------------------------------------------------------------------
# commands


def cmd_eval2f1(args, ctx):
    P = _params(args)
    z = parse_number(args.z)
    val, cd = certify(lambda c: hyp2f1(P, _exact_or_mp(z, c), c), ctx)
    return Outcome({"value": _s(val, cd)}, cd, text=_s(val, cd))


def cmd_schwarz(args, ctx):
    P = _params(args)
    z = parse_number(args.z)

    def D(c):
        return schwarz_map(P, _exact_or_mp(z, c), c)

    val, cd = certify(D, ctx)
    res = {"value": _s(val, cd)}
    bounds = {}
    if args.max_deg:
        bounds = {"max_deg": args.max_deg, "max_height": args.max_height}
        rep = alg.algebraicity_report(D, args.max_deg, args.max_height, ctx)
        res["minimal_polynomial"] = rep.to_dict()
    text = _s(val, cd)
    if "minimal_polynomial" in res and res["minimal_polynomial"]["evidence"]:
        text += "\nminimal polynomial: " + res["minimal_polynomial"]["evidence"]["polynomial"]
    return Outcome(res, cd, bounds, text)


def cmd_monodromy(args, ctx):
    target = args.target
    around = parse_number(args.around)
    if target[0] == "gauss":
        P = _params(args)
        base = Fraction(args.base) if args.base else Fraction(1, 2)

        def M(c):
            return numeric_monodromy(P, _exact_or_mp(around, c), c, base=base, orientation=args.orientation)

        val, cd = certify(M, ctx)
        res = {"target": "gauss", "params": str(P), "base": str(base), "matrix": _mat(val, cd)}
        if around in (0, 1) and args.orientation == 1:
            cf = monodromy_closed_form(P, ctx)
            ref = cf.A0 if around == 0 else cf.A1
            with ctx.work():
                res["closed_form"] = _mat(ref, cd)
                res["deviation"] = _s(mpmath.mnorm(val - ref, 1), 5)
        return Outcome(res, cd, text="\n".join(" ".join(r) for r in res["matrix"]))
    if target[0] == "family" and len(target) == 2:
        rec = catalog_get(target[1])
        system = rec.system()
        if system is None:
            raise PreconditionError(f"family {rec.name} stores no first-order system")
        if args.base is None:
            raise PreconditionError("--base is required for a family loop")
        base = parse_number(args.base)

        def M(c):
            return loop_monodromy(system, _exact_or_mp(base, c), _exact_or_mp(around, c), c,
                                  orientation=args.orientation).matrix

        val, cd = certify(M, ctx)
        res = {"target": rec.name, "base": args.base, "matrix": _mat(val, cd)}
        return Outcome(res, cd, text="\n".join(" ".join(r) for r in res["matrix"]))
    raise PreconditionError("--target must be 'gauss' or 'family NAME'")


def cmd_pf(args, ctx):
    if args.pf_cmd == "derive":
        ode = derive_form_ode(args.family, args.form)
        rec = catalog_get(args.family)
        printed = None
        try:
            printed = str(rec.ode(args.form))
        except PeriodLabError:
            pass
        res = {"family": rec.name, "form": args.form, "ode": str(ode), "printed": printed,
               "matches_printed": printed == str(ode) if printed is not None else None}
        return Outcome(res, None, text=str(ode))
    if args.pf_cmd == "verify":
        rep = singular_locus_consistency(args.family, ctx, run_apparent=not args.no_apparent)
        d = rep.to_dict()
        return Outcome(d, ctx.digits, text=f"{rep.family}: {'pass' if rep.passed else 'FAIL'}")
    rep = pullback_chain()
    return Outcome(rep.to_dict(), None, text="pullback chain: " + ("equal" if rep.passed else "NOT equal"))


def cmd_elliptic(args, ctx):
    fib = _fiber(args)
    if args.ell_cmd == "periods":
        def w(c):
            lat = periods(fib.curve, c)
            return [lat.omega1, lat.omega2]

        val, cd = certify(w, ctx)
        with ctx.work():
            tau = val[0] / val[1]
        res = {"input": fib.to_dict(), "omega1": _s(val[0], cd), "omega2": _s(val[1], cd), "tau": _s(tau, cd)}
        return Outcome(res, cd, text=f"omega1 = {res['omega1']}\nomega2 = {res['omega2']}")
    dec = cm_detect(fib.curve, args.max_coeff, ctx)
    res = {"input": fib.to_dict(), **dec.to_dict()}
    txt = f"CM, discriminant {dec.discriminant}" if dec.is_cm else f"no CM relation at height {args.max_coeff}"
    return Outcome(res, dec.confidence, {"max_coeff": args.max_coeff}, txt)


def cmd_curve(args, ctx):
    if args.curve_cmd == "genus":
        exps = [int(e) for e in args.exp.split(",")]
        g = superelliptic_genus(args.k, exps)
        return Outcome({"k": args.k, "exponents": exps, "genus": g}, None, text=str(g))
    if args.curve_cmd == "periodmatrix":
        cmp_ = period_matrix_compare(Fraction(args.z), ctx)
        return Outcome(cmp_.to_dict(), None, text=f"max deviation {_s(cmp_.max_deviation, 5)}")
    group = LEMMA_ALIASES.get(args.lemma, args.lemma)
    specs = map_specs(group, args.item)
    if not specs:
        raise PreconditionError(f"no maps for group {args.lemma!r} item {args.item}")
    rows, lines = [], []
    for spec in specs:
        pts = regular_rational_points(spec, args.samples, seed=args.seed)
        rep = identity_residual(spec, pts)
        row = {"identity": rep.to_dict()}
        ok = rep.matches_expectation
        if spec.differential:
            dif = differential_pullback_residual(spec, pts[0])
            row["differential"] = dif.to_dict()
            ok = ok and dif.to_dict().get("matches_expectation", True)
        row["matches_expectation"] = ok
        rows.append(row)
        holds = "holds" if rep.holds else "fails"
        lines.append(f"{spec.name}: {holds} (expected {rep.expected}){'' if ok else '  UNEXPECTED'}")
    return Outcome({"group": group, "item": args.item, "seed": args.seed, "maps": rows}, None, text="\n".join(lines))


def cmd_algebra(args, ctx):
    bounds = {"max_deg": args.max_deg, "max_height": args.max_height}
    if args.alg_cmd == "minpoly":
        rep = alg.algebraicity_report(expression_value(args.x), args.max_deg, args.max_height, ctx)
    elif args.alg_cmd == "simtest":
        rep = alg.sim_test(expression_value(args.r), expression_value(args.s), args.max_deg, args.max_height, ctx)
    else:
        vals = [expression_value(v) for v in args.values.split(";") if v.strip()]
        rel = alg.integer_relation(lambda c: [f(c) for f in vals], args.max_height, ctx)
        res = {"relation": None if rel is None else rel.to_dict()}
        txt = "no relation at bounds" if rel is None else " ".join(str(x) for x in rel.coefficients)
        return Outcome(res, None, {"max_height": args.max_height}, txt)
    d = rep.to_dict()
    txt = d["verdict"] + ("" if not d["evidence"] else ": " + d["evidence"]["polynomial"])
    return Outcome(d, None, bounds, txt)


def cmd_theorem1(args, ctx):
    fib = _fiber(args)
    rep = theorem1_report(fib, ctx, args.max_deg, args.max_height, args.cm_height, gamma_tests=not args.no_gamma)
    d = rep.to_dict()
    if args.footbal:
        d["footbal"] = footbal_check(fib, ctx, cm_height=args.cm_height).to_dict()
    bounds = {"max_deg": args.max_deg, "max_height": args.max_height, "cm_height": args.cm_height}
    return Outcome(d, rep.schwarz_digits or rep.cm.confidence, bounds,
                   f"codimension: {rep.codimension}\npart 3 condition: {rep.part3_condition}")


def cmd_bridge(args, ctx):
    samples = [Fraction(s.strip()) for s in args.samples.split(",") if s.strip()]
    rep = lemmagamma_bridge(samples, ctx)
    d = rep.to_dict()
    return Outcome(d, None, {"tolerance": d["tolerance"]},
                   f"max deviation {d['max_deviation']}: {'pass' if rep.passed else 'FAIL'}")


# --------------------------------------------------------------------------
# parser


def _add_globals(p: argparse.ArgumentParser, top: bool) -> None:
    kw = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--digits", type=int, help="decimal digits (bits = ceil(3.33 N) + 32)",
                   **({"default": DEFAULT_DIGITS} if top else kw))
    p.add_argument("--json", action="store_true", help="print the JSON envelope", **kw)
    p.add_argument("--seed", type=int, help="seed for random fixture points", **({"default": 0} if top else kw))


def _add_params(p):
    p.add_argument("--a", default="5/6")
    p.add_argument("--b", default="1/6")
    p.add_argument("--c", default="1")


def _add_fiber(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--t")
    g.add_argument("--z")
    g.add_argument("--j")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="periodlab", description=__doc__.splitlines()[0])
    _add_globals(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, handler, **kw):
        p = sub.add_parser(name, **kw)
        _add_globals(p, False)
        p.set_defaults(handler=handler)
        return p

    p = cmd("eval2f1", cmd_eval2f1, help="evaluate 2F1(a,b;c;z)")
    _add_params(p)
    p.add_argument("--z", required=True, help="RE[,IM]")

    p = cmd("schwarz", cmd_schwarz, help="Schwarz quotient at z")
    _add_params(p)
    p.add_argument("--z", required=True)
    p.add_argument("--max-deg", type=int, default=8, help="minimal polynomial search (0 to skip)")
    p.add_argument("--max-height", type=int, default=100)

    p = cmd("monodromy", cmd_monodromy, help="numeric loop monodromy")
    _add_params(p)
    p.add_argument("--target", nargs="+", default=["gauss"], help="gauss | family NAME")
    p.add_argument("--around", required=True, help="0, 1 or a point RE[,IM]")
    p.add_argument("--base", default=None)
    p.add_argument("--orientation", type=int, choices=(1, -1), default=1)

    p = cmd("pf", cmd_pf, help="Picard-Fuchs equations of the catalog families")
    pfs = p.add_subparsers(dest="pf_cmd", required=True)
    d = pfs.add_parser("derive")
    _add_globals(d, False)
    d.add_argument("--family", required=True)
    d.add_argument("--form", required=True)
    v = pfs.add_parser("verify")
    _add_globals(v, False)
    v.add_argument("--family", required=True)
    v.add_argument("--no-apparent", action="store_true")
    c = pfs.add_parser("pullback-check")
    _add_globals(c, False)

    p = cmd("elliptic", cmd_elliptic, help="periods and CM test of the elliptic fiber")
    es = p.add_subparsers(dest="ell_cmd", required=True)
    for name in ("periods", "cm"):
        e = es.add_parser(name)
        _add_globals(e, False)
        _add_fiber(e)
        if name == "cm":
            e.add_argument("--max-coeff", type=int, default=10**6)

    p = cmd("curve", cmd_curve, help="superelliptic curves and algebraic map identities")
    cs = p.add_subparsers(dest="curve_cmd", required=True)
    g = cs.add_parser("genus")
    _add_globals(g, False)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--exp", required=True, help="M0,M1,MZ")
    i = cs.add_parser("identities")
    _add_globals(i, False)
    i.add_argument("--lemma", required=True, help="hyperelliptic | elliptic-quotients (aliases 22aug06, 22aug)")
    i.add_argument("--item", type=int, default=None)
    i.add_argument("--samples", type=int, default=3)
    m = cs.add_parser("periodmatrix")
    _add_globals(m, False)
    m.add_argument("--z", required=True)

    p = cmd("algebra", cmd_algebra, help="minimal polynomials and integer relations")
    als = p.add_subparsers(dest="alg_cmd", required=True)
    for name in ("minpoly", "relation", "simtest"):
        a = als.add_parser(name)
        _add_globals(a, False)
        a.add_argument("--max-deg", type=int, default=alg.DEFAULT_MAX_DEG)
        a.add_argument("--max-height", type=int, default=alg.DEFAULT_MAX_HEIGHT)
        if name == "minpoly":
            a.add_argument("--x", required=True, help="expression, e.g. 'exp(2*pi*i/3)'")
        elif name == "simtest":
            a.add_argument("--r", required=True)
            a.add_argument("--s", required=True)
        else:
            a.add_argument("--values", required=True, help="expressions separated by ';'")

    p = cmd("theorem1", cmd_theorem1, help="full report for one fiber")
    _add_fiber(p)
    p.add_argument("--max-deg", type=int, default=alg.DEFAULT_MAX_DEG)
    p.add_argument("--max-height", type=int, default=alg.DEFAULT_MAX_HEIGHT)
    p.add_argument("--cm-height", type=int, default=10**6)
    p.add_argument("--no-gamma", action="store_true", help="skip the Gamma relation searches")
    p.add_argument("--footbal", action="store_true", help="also test both periods against Gamma(1/3)^3/pi")

    p = cmd("bridge", cmd_bridge, help="elliptic periods through the Gauss equation")
    p.add_argument("--samples", default="0.2,0.3,0.4")
    return parser


def _inputs(args) -> Dict[str, object]:
    skip = {"handler", "json"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    op = " ".join(x for x in (args.command, getattr(args, "pf_cmd", None), getattr(args, "ell_cmd", None),
                              getattr(args, "curve_cmd", None), getattr(args, "alg_cmd", None)) if x)
    env = {"status": "ok", "op": op, "inputs": _inputs(args), "result": None,
           "certified_digits": None, "precision_bits": None, "bounds": {}}
    code = 0
    try:
        ctx = PrecisionCtx.from_digits(args.digits)
        env["precision_bits"] = ctx.bits
        out = args.handler(args, ctx)
        env.update(result=out.result, certified_digits=out.certified_digits, bounds=out.bounds)
    except PeriodLabError as exc:
        code = exc.exit_code
        env.update(status="error", result={"error": type(exc).__name__, "message": str(exc)})
        out = None
    except (ValueError, ZeroDivisionError) as exc:
        code = 2
        env.update(status="error", result={"error": type(exc).__name__, "message": str(exc)})
        out = None
    if args.json:
        print(json.dumps(env, indent=2, default=str))
    elif out is None:
        print(f"error: {env['result']['error']}: {env['result']['message']}", file=sys.stderr)
    else:
        print(out.text if out.text is not None else json.dumps(out.result, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
