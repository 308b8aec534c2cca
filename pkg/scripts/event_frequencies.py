"""Empirical ``P(A_k)`` against ``2^-b_k`` for team plans.

Usage: ``python scripts/event_frequencies.py [runs] [seed] > events.csv``
"""

import csv
import sys
from fractions import Fraction

from hatguess import montecarlo as mc
from hatguess.plan import generate_plan
from hatguess.strategies import TeamStrategy

TARGETS = ("2/3", "3/4", "9/10", "1")


def main(runs=20_000, seed=0):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["u", "event", "expected", "empirical", "ci99_low", "ci99_high"])
    for u in TARGETS:
        rule = TeamStrategy(generate_plan(Fraction(u), 12))
        freqs, _ = mc.event_frequency(rule, runs, seed, max_players=2 * 10**6)
        for f in freqs:
            w.writerow([u, f.label, f.expected, f"{f.p:.5f}",
                        f"{f.p - f.half_width:.5f}", f"{f.p + f.half_width:.5f}"])


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
