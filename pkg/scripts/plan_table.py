"""Team plan parameters as CSV.

Usage: ``python scripts/plan_table.py [teams] [eps_scale] > plans.csv``
"""

import csv
import sys
from fractions import Fraction

from hatguess.plan import generate_plan, validate_plan

TARGETS = (("2/3", None), ("3/4", None), ("9/10", None), ("1", None), ("1", "0"))


def main(teams=12, eps_scale=1):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["u", "ell", "k", "mode", "n", "g", "r", "b", "s", "u_k", "alpha", "eps", "valid"])
    for u, ell in TARGETS:
        plan = generate_plan(Fraction(u), teams, ell=None if ell is None else Fraction(ell), eps_scale=eps_scale)
        ok = validate_plan(plan).passed
        for t in plan.teams:
            w.writerow([u, ell or "", t.k, t.mode, t.n, t.g, t.r, t.b, t.s, t.u_k, t.alpha, t.eps, ok])


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
