"""Prefix means at checkpoints for a few runs of each infinite-game preset.

Usage: ``python scripts/trajectories.py [N] [runs] [seed] > traj.csv``
Rows: ``strategy,run,k,zbar``.
"""

import csv
import sys

from hatguess import montecarlo as mc
from hatguess.strategies import preset

STRATEGIES = ("pairs", "even-odd", "block", "team-win", "team-lose", "team-alt", "mixed")


def main(N=10**6, runs=3, seed=0):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["strategy", "run", "k", "zbar"])
    for name in STRATEGIES:
        rule = preset(name)
        for run in range(runs):
            traj = mc.simulate_run(rule, N, mc.run_seed(seed, run))
            for k, v in traj.checkpoint_means():
                w.writerow([name, run, k, f"{float(v):.6f}"])


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
