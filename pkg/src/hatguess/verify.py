"""Acceptance checks grouped into suites.

Every check is deterministic given the base seed: each criterion derives its
own seed from ``(seed, criterion)`` with ``SeedSequence``.  Reports contain no
timings so two invocations produce identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from . import montecarlo as mc
from .core import RandomSource, is_square
from .plan import HALF, generate_plan, validate_plan
from .strategies import (
    PRESETS, ContinuumGuess, CountableColorGuess, EvenOdd, ModKGroups, ModKSum, TeamStrategy,
    dispatched_rule, preset, strategy_from_spec,
)

SCHEMA = "hatguess.verify/1"

SUITES = {
    "finite": (1, 2, 3, 4),
    "infinite": (5, 6),
    "appendix": (7, 9),
    "colors": (8,),
}
SUITES["all"] = tuple(sorted(c for cs in SUITES.values() for c in cs))

TITLES = {
    1: "exact finite-game suite",
    2: "bound sharpness by exhaustive search",
    3: "independence of correctness from visible hats",
    4: "adversarial tail-black assignment",
    5: "main theorem finite-horizon proxy",
    6: "block strategy with liminf 0 and limsup 1",
    7: "team construction plans and sure bounds",
    8: "colors suite",
    9: "mixed strategy dispatch and inactive set",
}

# library used for the main-theorem proxy: team-based strategies use a
# steeper eps schedule and the block strategy a dense schedule so that the
# finite window k_min..N already sees enough structure
THEOREM_LIBRARY = {
    "constant": PRESETS["constant"],
    "random": PRESETS["random"],
    "even-odd": PRESETS["even-odd"],
    "pairs": PRESETS["pairs"],
    "block-dense": PRESETS["block-dense"],
    "team-win": {"kind": "team", "params": {"u": "3/4", "teams": 12, "mode": "win", "eps_scale": 25}},
    "team-lose": {"kind": "team", "params": {"u": "3/4", "teams": 12, "mode": "lose", "eps_scale": 25}},
    "team-alt": {"kind": "team", "params": {"u": "1", "ell": "0", "teams": 12, "eps_scale": 25}},
    "mixed": {"kind": "mixed", "params": {"law": PRESETS["mixed"]["params"]["law"], "eps_scale": 25}},
}

TEAM_PLAN_TARGETS = (("2/3", None), ("3/4", None), ("9/10", None), ("1", None), ("1", "0"))


@dataclass
class CriterionResult:
    criterion: int
    passed: bool
    detail: dict = field(default_factory=dict)

    @property
    def title(self) -> str:
        return TITLES[self.criterion]

    def line(self) -> str:
        return f"criterion {self.criterion} ({self.title}): {'PASS' if self.passed else 'FAIL'}"

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "title": self.title, "passed": self.passed, "detail": self.detail}


def sub_seed(seed: int, criterion: int) -> int:
    return int(np.random.SeedSequence([seed, criterion]).generate_state(1, np.uint64)[0])


def finite_presets():
    return [(name, preset(name)) for name in PRESETS if preset(name).space.is_finite]


def criterion_1(seed: int) -> CriterionResult:
    ok, rows = True, []
    for n in range(2, 7):
        d = exact.exact_distribution(preset("even-odd", n), n)
        good = d.prob(1) == HALF and d.prob(0) == HALF
        ok &= good
        rows.append({"check": "even-odd all-correct", "n": n, "P(all)": str(d.prob(1)), "ok": good})
        if n % 2 == 0:
            d = exact.exact_distribution(preset("pairs"), n)
            good = d.pmf == {HALF: 1}
            ok &= good
            rows.append({"check": "pairs surely half", "n": n, "pmf": d.to_rows(), "ok": good})
    means = {}
    for name, rule in finite_presets():
        want = Fraction(1, rule.space.K)
        vals = [exact.exact_mean(rule, n) for n in range(2, 7)]
        good = all(v == want for v in vals)
        ok &= good
        means[name] = {"expected": str(want), "means": [str(v) for v in vals], "ok": good}
    return CriterionResult(1, ok, {"distributions": rows, "exact_mean": means})


def criterion_2(seed: int) -> CriterionResult:
    ok, rows = True, []
    for n in (2, 3, 4):
        for objective in (exact.MAX_ALL_CORRECT, exact.MAX_GUARANTEED):
            if n == 4 and objective == exact.MAX_GUARANTEED:
                continue
            best, table = exact.search_strategy_space(n, objective)
            d = exact.exact_distribution(table)
            achieved = d.prob(1) if objective == exact.MAX_ALL_CORRECT else min(d.pmf)
            good = achieved == best and (best == HALF if objective == exact.MAX_ALL_CORRECT else best <= HALF)
            ok &= good
            rows.append({"n": n, "objective": objective, "optimum": str(best), "witness_value": str(achieved),
                         "witness": [list(t) for t in table.tables], "ok": good})
    return CriterionResult(2, ok, {"search": rows})


def criterion_3(seed: int) -> CriterionResult:
    ok, rows, skipped = True, {}, {}
    rules = finite_presets() + [("even-odd group 12", EvenOdd(12)), ("mod-3-sum group 8", ModKSum(3, 0, 8))]
    for name, rule in rules:
        checked = []
        for i in range(1, 9):
            w = rule.window(i) - {i}
            if len(w) > 12:
                skipped.setdefault(name, []).append(i)
                continue
            rep = exact.verify_independence(rule, i)
            ok &= rep.passed
            checked.append({"player": i, "window": len(w), "configurations": len(rep.conditionals),
                            "ok": rep.passed})
        rows[name] = checked
    # the mixed rule's windows include every noise hat; given the noise each
    # active player follows the dispatched rule on renumbered players
    mixed = preset("mixed")
    for w, target in exact.dispatch_probabilities(mixed):
        inner = dispatched_rule(target, mixed.num_teams, mixed.eps_scale)
        checked = []
        for i in range(1, 9):
            if is_square(i):
                continue
            a = mixed.active_index(i)
            rep = exact.verify_independence(inner, a)
            ok &= rep.passed
            checked.append({"player": i, "active_index": a, "window": len(inner.window(a) - {a}), "ok": rep.passed})
        rows[f"mixed given target ({target[0]},{target[1]})"] = checked
    return CriterionResult(3, ok, {"checked": rows, "skipped_window_over_12": skipped})


def criterion_4(seed: int) -> CriterionResult:
    ok, rows = True, {}
    for name, rule in finite_presets():
        witness, wrong = exact.adversarial_tail_black_search(rule, 8)
        good = wrong >= 4
        ok &= good
        rows[name] = {"wrong": wrong, "witness": [int(x) for x in witness.prefix], "ok": good}
    return CriterionResult(4, ok, {"n": 8, "results": rows})


def criterion_5(seed: int) -> CriterionResult:
    s = sub_seed(seed, 5)
    ok, rows = True, {}
    for name, spec in THEOREM_LIBRARY.items():
        rep = mc.verify_theorem_main(strategy_from_spec(spec), 10**5, 100, tol=0.02, seed=s, name=name)
        ok &= rep.passed
        rows[name] = rep.to_dict()
    # sparse block schedules are reported, not gated: with few blocks inside
    # the window the proxy fails with probability 2^-(blocks in window)
    info = {}
    for name in ("block", "block-factorial"):
        rep = mc.verify_theorem_main(preset(name), 10**5, 100, tol=0.02, seed=s, name=name)
        info[name] = {"failing_runs": rep.failed, "passed": rep.passed}
    return CriterionResult(5, ok, {"N": 10**5, "runs": 100, "tol": 0.02, "library": rows,
                                   "informational": info})


def criterion_6(seed: int) -> CriterionResult:
    s = sub_seed(seed, 6)
    rule = preset("block")
    N, runs = rule.last, 200
    sure_fail, hi_ok, lo_ok = [], 0, 0
    hits = np.zeros(len(rule.ends), dtype=int)
    for run in range(runs):
        traj, hats = mc.simulate_run(rule, N, mc.run_seed(s, run), checkpoints=(), return_hats=True)
        ev = rule.events(hats, len(rule.ends))
        hits += ev
        bad = mc.block_sure_checks(rule, traj.cumulative(), ev)
        if bad:
            sure_fail.append({"run": run, "violations": [list(b) for b in bad]})
        est = mc.density_estimate(traj, mc.DEFAULT_K_MIN)
        hi_ok += est.upper >= Fraction(9, 10)
        lo_ok += est.lower <= Fraction(1, 10)
    in_window = sum(1 for e in rule.ends if e >= mc.DEFAULT_K_MIN)
    need = 1 - 2.0 ** -in_window - 0.03
    freqs, _ = mc.event_frequency(rule, runs=10**4, seed=s)
    freq_ok = all(abs(f.p - 0.5) <= 0.02 for f in freqs)
    ok = (len(rule.ends) >= 10 and not sure_fail and hi_ok / runs >= need and lo_ok / runs >= need
          and freq_ok)
    return CriterionResult(6, ok, {
        "ends": list(rule.ends), "runs": runs, "N": N,
        "sure_inequality_failures": sure_fail[:10],
        "frac_upper_ge_0.9": hi_ok / runs, "frac_lower_le_0.1": lo_ok / runs, "threshold": need,
        "event_frequency": [f.to_dict() for f in freqs], "event_frequency_ok": freq_ok,
        "event_frequency_full_runs": (hits / runs).tolist(),
    })


def criterion_7(seed: int) -> CriterionResult:
    s = sub_seed(seed, 7)
    ok, rows = True, []
    for u, ell in TEAM_PLAN_TARGETS:
        plan = generate_plan(Fraction(u), 12, ell=None if ell is None else Fraction(ell))
        rule = TeamStrategy(plan)
        vrep = validate_plan(plan)
        N = 2 * 10**6
        dens = mc.verify_density_targets(rule, N, runs=200, seed=s)
        freqs, mat = mc.event_frequency(rule, runs=4 * 10**4, seed=s, max_players=N)
        freq_ok = all(abs(f.p - f.expected) <= 0.02 for f in freqs)
        corr = mc.pairwise_correlations(mat)
        corr_ok = all(abs(c) <= 0.03 for c in corr.values())
        good = vrep.passed and dens.passed and freq_ok and corr_ok
        ok &= good
        rows.append({
            "u": u, "ell": ell, "teams": len(plan.teams), "starts": [str(t.n) for t in plan.teams],
            "plan_valid": vrep.passed, "plan_violations": [list(v) for v in vrep.violations[:5]],
            "sure_checks": dens.to_dict(),
            "event_frequency": [f.to_dict() for f in freqs], "event_frequency_ok": freq_ok,
            "max_abs_correlation": max((abs(c) for c in corr.values()), default=0.0), "correlation_ok": corr_ok,
            "ok": good,
        })
    return CriterionResult(7, ok, {"plans": rows})


def criterion_8(seed: int) -> CriterionResult:
    s = sub_seed(seed, 8)
    ok, detail = True, {}
    mod = {}
    for K in (2, 3, 4):
        n = 2 * K
        p = exact.exact_distribution(ModKSum(K, 0, group=n), n).prob(1)
        table = exact.table_from_rule(ModKGroups(K), n)
        counts = table.correct_matrix().sum(axis=0)
        surely = bool(np.all(counts == n // K))
        good = p == Fraction(1, K) and surely
        ok &= good
        mod[K] = {"P(all correct)": str(p), "groups_surely_one_each": surely, "ok": good}
    detail["mod_k"] = mod

    rng = RandomSource(s, 0).generator
    rule = CountableColorGuess(Fraction(1, 10))
    n_players, runs = 40, 10**4
    K = np.array([rule.K(i) for i in range(1, n_players + 1)], dtype=np.int64)
    guesses = np.array([rule.guess(i, None) for i in range(1, n_players + 1)], dtype=np.int64)
    hats = rng.integers(0, K, size=(runs, n_players), dtype=np.int64)
    freq = float(np.any(hats == guesses, axis=1).mean())
    union = float(sum(Fraction(1, int(k)) for k in K))
    good = union < 0.1 and freq < 0.1
    ok &= good
    detail["countable"] = {"players": n_players, "runs": runs, "sum_inv_K": union,
                           "freq_at_least_one_correct": freq, "ok": good}

    cont = {}
    for r in (ContinuumGuess("mean", 10), ContinuumGuess("constant", value=0.5)):
        src = RandomSource(s, 1)
        correct = 0
        for _ in range(runs):
            h = src.generator.random(100)
            correct += int(np.count_nonzero(r.correct_bits(h, 100)))
        cont[r.rule] = correct
    good = all(v == 0 for v in cont.values())
    ok &= good
    detail["continuum"] = {"runs": runs, "players": 100, "correct": cont, "ok": good}
    return CriterionResult(8, ok, detail)


def criterion_9(seed: int) -> CriterionResult:
    s = sub_seed(seed, 9)
    rule = preset("mixed")
    law = exact.dispatch_probabilities(rule)
    exact_ok = all(w == a for (w, _), (a, _) in zip(law, rule.law.atoms))
    draws = 10**4
    src = RandomSource(s, 0)
    noise = np.stack([src.bits(rule.B) for _ in range(draws)])
    counts = {}
    for row in noise:
        target, _ = rule.dispatch(row)
        counts[target] = counts.get(target, 0) + 1
    freqs = {f"({l},{u})": counts.get((l, u), 0) / draws for _, (l, u) in rule.law.atoms}
    freq_ok = all(abs(counts.get(t, 0) / draws - float(w)) <= 0.02 for w, t in rule.law.atoms)

    N = 10**6
    idx = np.arange(1, N + 1, dtype=np.int64)
    r = np.floor(np.sqrt(idx)).astype(np.int64)
    r -= (r * r > idx)
    r += ((r + 1) * (r + 1) <= idx)
    sq = r * r == idx
    count = int(sq.sum())
    cum = np.cumsum(sq)
    checkpoints = [10**k for k in range(2, 7)]
    density = {str(k): int(cum[k - 1]) / k for k in checkpoints}
    dens_ok = count <= math.isqrt(N) and count == math.isqrt(N)
    ok = exact_ok and freq_ok and dens_ok
    return CriterionResult(9, ok, {
        "dispatch_exact": [[str(w), [str(l), str(u)]] for w, (l, u) in law], "dispatch_exact_ok": exact_ok,
        "draws": draws, "dispatch_frequency": freqs, "dispatch_frequency_ok": freq_ok,
        "inactive_count_upto_1e6": count, "sqrt_N": math.isqrt(N), "inactive_density": density,
        "inactive_ok": dens_ok,
    })


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 10)}


def run_criteria(ids, seed: int = 0) -> list[CriterionResult]:
    return [CRITERIA[i](seed) for i in ids]


def run_suite(suite: str, seed: int = 0) -> list[CriterionResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return run_criteria(SUITES[suite], seed)


def report_json(results: list[CriterionResult], suite: str, seed: int) -> str:
    doc = {"schema": SCHEMA, "suite": suite, "seed": seed, "passed": all(r.passed for r in results),
           "criteria": [r.to_dict() for r in results]}
    return json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n"
