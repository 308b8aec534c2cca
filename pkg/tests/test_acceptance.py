"""One test per acceptance criterion, each held to its runtime budget.

Run directly (``python tests/test_acceptance.py``) to print one pass/fail line
per criterion without pytest.
"""

import subprocess
import sys
import time

import pytest

from hatguess import verify

SEED = 42
BUDGET_S = {1: 10, 2: 60, 3: 10, 4: 30, 5: 300, 6: 300, 7: 600, 8: 120, 9: 120}


def _check(i, log=None):
    t0 = time.perf_counter()
    result = verify.CRITERIA[i](SEED)
    elapsed = time.perf_counter() - t0
    within = elapsed < BUDGET_S[i]
    line = f"{result.line()} [{elapsed:.1f}s of {BUDGET_S[i]}s budget]"
    if log is not None:
        log.append(line)
    print(line)
    return result, within


@pytest.mark.parametrize("i", sorted(BUDGET_S))
def test_criterion(i, acceptance_log):
    result, within = _check(i, acceptance_log)
    assert result.passed, result.detail
    assert within


def _verify_cmd():
    return [sys.executable, "-m", "hatguess", "verify", "--suite", "all", "--seed", str(SEED)]


def test_criterion_10_reproducible_reports(acceptance_log):
    # the two invocations run side by side; they share nothing but the seed
    procs = [subprocess.Popen(_verify_cmd(), stdout=subprocess.PIPE, stderr=subprocess.DEVNULL) for _ in range(2)]
    outs = [p.communicate()[0] for p in procs]
    same = outs[0] == outs[1] and len(outs[0]) > 0
    acceptance_log.append(f"criterion 10 (reproducible verify reports): {'PASS' if same else 'FAIL'}")
    assert same


if __name__ == "__main__":
    ok = True
    for i in sorted(BUDGET_S):
        r, within = _check(i)
        ok &= r.passed and within
    outs = [subprocess.run(_verify_cmd(), capture_output=True).stdout for _ in range(2)]
    same = outs[0] == outs[1]
    print(f"criterion 10 (reproducible verify reports): {'PASS' if same else 'FAIL'}")
    sys.exit(0 if ok and same else 1)
