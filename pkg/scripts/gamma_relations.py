"""Search for Gamma(1/3) relations of F(z), F(1-z) at the j = 54000 fiber.

With the default bounds nothing is found; both relations have degree 12:

    python3 scripts/gamma_relations.py --digits 500 --max-deg 12 --max-height 1000000000
"""

import argparse

from periodlab.algebraicity import gamma_quotient_test
from periodlab.hodge_pipeline import _f_fn, fiber_input
from periodlab.numerics import PrecisionCtx


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--j", type=int, default=54000)
    ap.add_argument("--digits", type=int, default=300)
    ap.add_argument("--max-deg", type=int, default=8)
    ap.add_argument("--max-height", type=int, default=10**8)
    args = ap.parse_args()
    ctx = PrecisionCtx.from_digits(args.digits)
    fib = fiber_input(j=args.j)
    for label, reflect in (("F(z)", False), ("F(1-z)", True)):
        rep = gamma_quotient_test(_f_fn(fib, reflect), ctx, args.max_deg, args.max_height)
        poly = rep.evidence.to_text() if rep.evidence else "-"
        print(f"{label:7s} {rep.verdict:22s} {poly}")


if __name__ == "__main__":
    main()
