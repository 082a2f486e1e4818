"""Codimension reports for a few fibers of the (5/6, 1/6, 1) family.

    python3 scripts/fiber_reports.py [--digits 100] [--gamma]
"""

import argparse
import json
from fractions import Fraction

from periodlab.hodge_pipeline import fiber_input, theorem1_report
from periodlab.numerics import PrecisionCtx

FIBERS = [
    ("t = 1/5", dict(t=Fraction(1, 5))),
    ("z = 1/2 (j = 1728)", dict(z=Fraction(1, 2))),
    ("j = 54000", dict(j=54000)),
    ("j = -12288000", dict(j=-12288000)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--digits", type=int, default=100)
    ap.add_argument("--gamma", action="store_true", help="run the Gamma relation searches (needs ~300 digits)")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    ctx = PrecisionCtx.from_digits(args.digits)
    for name, kw in FIBERS:
        rep = theorem1_report(fiber_input(**kw), ctx, max_deg=4, max_height=100, gamma_tests=args.gamma)
        if args.json:
            print(json.dumps({"fiber": name, **rep.to_dict()}, indent=2))
            continue
        cm = f"CM disc {rep.cm.discriminant}" if rep.cm.is_cm else "not CM"
        print(f"{name:22s} {cm:16s} codimension {rep.codimension:24s} part 3: {rep.part3_condition}")


if __name__ == "__main__":
    main()
