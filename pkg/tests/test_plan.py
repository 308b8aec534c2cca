import dataclasses
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hatguess.plan import (
    HALF, LOSE, WIN, TeamPlan, _sqrt_third, blocks_per_team, default_eps_schedule, default_u_schedule,
    generate_plan, validate_plan,
)

TARGETS = [Fraction(2, 3), Fraction(3, 4), Fraction(9, 10), Fraction(1)]


def test_blocks_per_team_table():
    assert [blocks_per_team(k) for k in range(15)] == [1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 4]
    for k in range(2000):
        assert blocks_per_team(k) == math.floor(math.log2(k + 2))


def test_borel_cantelli_partial_sum_exceeds_three():
    # every dyadic range of k + 2 contributes exactly 1
    total = sum(Fraction(1, 2 ** blocks_per_team(k)) for k in range(62))
    assert total == 5 and total > 3


def test_sqrt_third_monotone_and_close():
    vals = [_sqrt_third(b) for b in range(1, 101)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert all(c / b >= d / (b + 1) for b, (c, d) in enumerate(zip(vals, vals[1:]), start=1))
    for b, c in enumerate(vals, start=1):
        assert abs(float(c) - math.sqrt(b) / 3) < 1 / 30


@pytest.mark.parametrize("u", TARGETS)
def test_u_schedule_bounds_and_monotone(u):
    us = [default_u_schedule(u, k) for k in range(1, 300)]
    assert all(HALF < x < u for x in us)
    assert all(a <= b for a, b in zip(us, us[1:]))


def test_u_one_slack_grows():
    slack = {}
    for k in range(1, 4000):
        b = blocks_per_team(k)
        slack.setdefault(b, set()).add((1 - default_u_schedule(1, k)) * b)
    assert all(len(v) == 1 for v in slack.values())
    per_b = [next(iter(slack[b])) for b in sorted(slack)]
    assert all(x < y for x, y in zip(per_b, per_b[1:]))


def test_schedule_domain_errors():
    with pytest.raises(ValueError):
        default_u_schedule(HALF, 1)
    with pytest.raises(ValueError):
        generate_plan(Fraction(11, 10), 3)
    with pytest.raises(ValueError):
        generate_plan(Fraction(3, 4), 3, ell=Fraction(3, 5))
    with pytest.raises(ValueError):
        generate_plan(Fraction(3, 4), 3, u_schedule=lambda u, k: u)
    assert default_eps_schedule(3, 5) == Fraction(1, 25)


@pytest.mark.parametrize("u", TARGETS)
@pytest.mark.parametrize("ell", [None, Fraction(0), Fraction(1, 4)])
def test_generated_plans_validate(u, ell):
    plan = generate_plan(u, 11, ell=ell)
    rep = validate_plan(plan)
    assert rep.passed, rep.violations
    t0 = plan.teams[0]
    assert t0.n == 0 and t0.g == 0 and t0.alpha == 0
    for t in plan.teams:
        assert t.mode == (LOSE if ell is not None and t.k % 2 else WIN)
        assert t.g == t.alpha * t.n and t.s * t.b == t.g and t.s % 2 == 0 and t.r % 2 == 0


def test_known_team_starts():
    assert [t.n for t in generate_plan(Fraction(3, 4), 6).teams] == [0, 4, 20, 84, 448, 2704]
    assert [t.n for t in generate_plan(Fraction(1), 5).teams] == [0, 4, 14, 84, 546]


def test_pure_pairs_target():
    plan = generate_plan(HALF, 4)
    assert all(t.g == 0 and t.u_k == HALF for t in plan.teams)
    assert validate_plan(plan).passed


@settings(max_examples=30)
@given(q=st.integers(3, 12), data=st.data())
def test_random_rational_targets_validate(q, data):
    p = data.draw(st.integers(q // 2 + 1, q))
    plan = generate_plan(Fraction(p, q), 6)
    assert validate_plan(plan).passed


def test_json_round_trip():
    plan = generate_plan(Fraction(9, 10), 9, ell=Fraction(1, 10))
    assert TeamPlan.from_json(plan.to_json()) == plan


def test_team_of_matches_linear_scan():
    plan = generate_plan(Fraction(3, 4), 6)
    for i in list(range(1, 500)) + [2703, 2704, 2705, plan.horizon, plan.horizon + 1]:
        want = next((t for t in plan.teams if t.n < i <= t.end), None)
        assert plan.team_of(i) == want


def _tamper(plan, k, **changes):
    teams = list(plan.teams)
    teams[k] = dataclasses.replace(teams[k], **changes)
    return dataclasses.replace(plan, teams=tuple(teams))


@pytest.mark.parametrize("k,changes,rule", [
    (2, {"r": 2}, "sandwich"),
    (3, {"b": 3}, "b_k"),
    (2, {"eps": Fraction(1, 2)}, "eps"),
    (0, {"n": 2}, "n_0"),
])
def test_validator_catches_tampering(k, changes, rule):
    rep = validate_plan(_tamper(generate_plan(Fraction(3, 4), 6), k, **changes))
    assert not rep.passed
    assert any(rule in v[1] for v in rep.violations), rep.violations


def test_validator_catches_odd_block_size():
    plan = generate_plan(Fraction(3, 4), 6)
    t = plan.teams[3]
    rep = validate_plan(_tamper(plan, 3, s=t.s + 1))
    assert not rep.passed
