import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hatguess import montecarlo as mc
from hatguess.core import OutcomeTrajectory, RandomSource
from hatguess.plan import generate_plan
from hatguess.strategies import OracleCheat, Pairs, TeamStrategy, preset


def test_runs_are_reproducible_and_split():
    rule = preset("team-win")
    a = mc.simulate_run(rule, 5000, RandomSource(3, 0))
    b = mc.simulate_run(rule, 5000, RandomSource(3, 0))
    c = mc.simulate_run(rule, 5000, RandomSource(3, 1))
    assert np.array_equal(a.correct, b.correct)
    assert not np.array_equal(a.correct, c.correct)


def test_default_checkpoints_include_structure():
    rule = preset("team-win")
    cps = mc.default_checkpoints(rule, 3000)
    assert all(t.n in cps for t in rule.plan.teams if 1 <= t.n <= 3000)
    assert all(t.n + t.g in cps for t in rule.plan.teams if 1 <= t.n + t.g <= 3000)
    assert set(preset("block").ends[:7]) <= set(mc.default_checkpoints(preset("block"), 2000))


@given(st.lists(st.booleans(), min_size=12, max_size=300), st.integers(1, 10), st.booleans())
def test_density_estimate_matches_brute_force(bits, k_min, even):
    traj = OutcomeTrajectory(np.array(bits))
    est = mc.density_estimate(traj, k_min, even_only=even)
    vals = [Fraction(sum(bits[:k]), k) for k in range(k_min, len(bits) + 1) if not even or k % 2 == 0]
    assert est.lower == min(vals) and est.upper == max(vals)


def test_density_estimate_window_checked():
    with pytest.raises(ValueError):
        mc.density_estimate(OutcomeTrajectory(np.ones(10)), 10)


@given(st.lists(st.booleans(), min_size=1, max_size=60),
       st.fractions(0, 1, max_denominator=10**25), st.booleans())
def test_exact_comparisons_match_fractions(bits, bound, strict):
    cum = np.cumsum(np.array(bits, dtype=np.int64))
    ks = np.arange(1, len(bits) + 1)
    vals = [Fraction(int(cum[k - 1]), k) for k in ks]
    le = all(v < bound if strict else v <= bound for v in vals)
    ge = all(v > bound if strict else v >= bound for v in vals)
    assert mc.all_le(cum, ks, bound, strict)[0] == le
    assert mc.all_ge(cum, ks, bound, strict)[0] == ge


class _Ones:
    class generator:
        @staticmethod
        def bytes(n):
            return b"\xff" * n


def test_block_parity_masking():
    lengths = [0, 1, 7, 8, 9, 15, 16, 17, 1001]
    par = mc.random_block_parities(_Ones(), lengths, runs=3)
    assert par.tolist() == [[L % 2 for L in lengths]] * 3


def test_block_parities_are_fair():
    par = mc.random_block_parities(RandomSource(0), [1, 13, 1000], runs=20_000)
    assert np.all(np.abs(par.mean(axis=0) - 0.5) < 0.015)


def test_team_event_frequencies():
    rule = TeamStrategy(generate_plan(Fraction(3, 4), 7))
    freqs, mat = mc.event_frequency(rule, runs=20_000, seed=1)
    assert [f.label for f in freqs] == [f"A_{k}" for k in range(1, 7)]
    for f in freqs:
        sd = (f.expected * (1 - f.expected) / f.runs) ** 0.5
        assert abs(f.p - f.expected) < 5 * sd
    corr = mc.pairwise_correlations(mat)
    assert corr and all(abs(c) < 0.05 for c in corr.values())


def test_theorem_check_passes_for_pairs_and_fails_for_cheat():
    assert mc.verify_theorem_main(Pairs(), 2000, 5).passed
    rep = mc.verify_theorem_main(OracleCheat(), 2000, 5)
    assert not rep.passed and rep.failed == 5


def test_team_sure_checks_pass_on_simulations():
    rule = TeamStrategy(generate_plan(Fraction(1), 9, ell=Fraction(0)))
    for run in range(10):
        traj, hats = mc.simulate_run(rule, 50_000, RandomSource(5, run), return_hats=True)
        assert mc.team_sure_checks(rule, traj.cumulative(), rule.events(hats)) == []


def test_team_sure_checks_detect_bad_trajectory():
    rule = TeamStrategy(generate_plan(Fraction(3, 4), 6))
    cum = np.cumsum(np.ones(3000, dtype=np.int64))
    checks = {v[0] for v in mc.team_sure_checks(rule, cum, {})}
    assert {"nk-bound", "gambler-upper"} <= checks


def test_density_targets_report():
    rule = TeamStrategy(generate_plan(Fraction(2, 3), 8))
    rep = mc.verify_density_targets(rule, 30_000, runs=20, seed=2)
    assert rep.passed and rep.runs == 20
    for k, s in rep.stats["peak_on_A"].items():
        t = rule.plan.teams[int(k)]
        assert s["worst"] >= float(t.u_k - t.eps / (1 + t.alpha)) - 1e-12


def test_run_report_and_serialization():
    rule = Pairs()
    traj, hats = mc.simulate_run(rule, 400, RandomSource(0), return_hats=True)
    rep = mc.run_report(rule, traj, hats, run=0)
    assert rep["ok"] and Fraction(rep["lower"]) <= Fraction(rep["upper"])
    line = mc.jsonl([rep])
    assert json.loads(line) == json.loads(json.dumps(rep))
    table = mc.checkpoints_csv(traj).splitlines()
    assert table[0] == "k,numerator,denominator"
    k, num, den = map(int, table[-1].split(","))
    assert k == 400 and Fraction(num, den) == Fraction(200, 400)


def test_block_run_report_events():
    rule = preset("block")
    traj, hats = mc.simulate_run(rule, 20_000, RandomSource(1), return_hats=True)
    rep = mc.run_report(rule, traj, hats, 0)
    assert rep["ok"] and len(rep["events"]) == 8


def test_horizon_guard():
    with pytest.raises(mc.HorizonError):
        mc.simulate_run(preset("block"), mc.HORIZON_GUARD + 1, RandomSource(0))
