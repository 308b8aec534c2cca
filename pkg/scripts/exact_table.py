"""Exact law of the correct fraction for every finite-color preset, n = 2..6.

Writes CSV rows ``strategy,n,zbar,prob_num,prob_den`` to stdout.
"""

import csv
import sys

from hatguess import exact
from hatguess.strategies import PRESETS, preset


def main():
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["strategy", "n", "zbar", "prob_num", "prob_den"])
    for name in PRESETS:
        if not preset(name).space.is_finite or name == "mixed":
            continue
        for n in range(2, 7):
            for v, p, q in exact.exact_distribution(preset(name, n), n).to_rows():
                w.writerow([name, n, v, p, q])


if __name__ == "__main__":
    main()
