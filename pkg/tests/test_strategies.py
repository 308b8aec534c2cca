from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hatguess.core import RandomSource, is_square, sample_assignment
from hatguess.plan import generate_plan
from hatguess.strategies import (
    PRESETS, BlockL0U1, CountableColorGuess, EvenOdd, MixedStrategy, ModKSum, OracleCheat, Pairs,
    PointLaw, TeamStrategy, countable_K, factorial_block_ends, geometric_block_ends, nth_non_square,
    preset, ratio_block_ends, splitmix64, splitmix64_array, squares_upto, strategy_from_spec,
)

NAMES = sorted(PRESETS)
RULES = {name: preset(name) for name in NAMES}


def _hats(rule, H, seed):
    return np.asarray(sample_assignment(rule.space, H, RandomSource(seed)).prefix).copy()


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=25)
@given(i=st.integers(1, 64), seed=st.integers(0, 2**32))
def test_window_soundness(name, i, seed):
    """Re-sampling every hat outside ``window(i)``, the own hat included,
    leaves player ``i``'s guess unchanged."""
    rule = RULES[name]
    w = rule.window(i)
    assert i not in w
    H = max([rule.horizon(i), i] + list(w)) + 8
    hats = _hats(rule, H, seed)
    g = rule.guess(i, hats)
    other = _hats(rule, H, seed + 1)
    keep = np.array(sorted(w), dtype=int) - 1
    other[keep] = hats[keep]
    assert rule.guess(i, other) == g


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=15)
@given(N=st.integers(1, 160), seed=st.integers(0, 2**32))
def test_scalar_and_vector_paths_agree(name, N, seed):
    rule = RULES[name]
    hats = _hats(rule, rule.horizon(N), seed)
    vec = rule.correct_bits(hats, N)
    ref = np.array([rule.guess(i, hats) == hats[i - 1] for i in range(1, N + 1)])
    assert vec.shape == (N,) and np.array_equal(vec, ref)


@pytest.mark.parametrize("rule", [
    TeamStrategy(generate_plan(Fraction(3, 4), 8)),
    TeamStrategy(generate_plan(Fraction(1), 8, ell=Fraction(0))),
    TeamStrategy(generate_plan(Fraction(2, 3), 8), mode="lose"),
    BlockL0U1(ratio_block_ends(30, Fraction(5, 4))),
], ids=["win", "alternating", "lose", "dense-blocks"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_paths_agree_deep_into_plans(rule, seed):
    N = 2500
    hats = _hats(rule, rule.horizon(N), seed)
    ref = np.array([rule.guess(i, hats) == hats[i - 1] for i in range(1, N + 1)])
    assert np.array_equal(rule.correct_bits(hats, N), ref)


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=15)
@given(N=st.integers(2, 300), data=st.data())
def test_truncation_is_exact(name, N, data):
    """Evaluating ``M < N`` players on the same hats gives the prefix of the
    ``N``-player evaluation."""
    rule = RULES[name]
    M = data.draw(st.integers(1, N))
    hats = _hats(rule, rule.horizon(N), data.draw(st.integers(0, 2**32)))
    assert np.array_equal(rule.correct_bits(hats, N)[:M], rule.correct_bits(hats, M))


@pytest.mark.parametrize("name", NAMES)
def test_spec_round_trip(name):
    rule = RULES[name]
    again = strategy_from_spec(rule.to_spec())
    assert type(again) is type(rule) and again.params() == rule.params()


def test_even_odd_all_or_nothing():
    rule = EvenOdd(6)
    for seed in range(20):
        bits = rule.correct_bits(_hats(rule, 6, seed), 6)
        assert bits.all() or not bits.any()


def test_pairs_exactly_one_per_pair():
    rule = Pairs()
    bits = rule.correct_bits(_hats(rule, 1000, 3), 1000)
    assert np.all(bits[0::2] ^ bits[1::2])


def test_mod_k_sum_window_and_range():
    rule = ModKSum(3, 1, group=5)
    assert rule.window(7) == frozenset({6, 8, 9, 10})
    assert {rule.guess(i, _hats(rule, 10, 0)) for i in range(1, 11)} <= {0, 1, 2}


def test_oracle_cheat_is_flagged():
    rule = OracleCheat()
    assert not rule.valid and 1 in rule.window(1)


def test_block_schedules():
    assert geometric_block_ends() == (2, 4, 6, 8, 10, 100, 1000, 10**4, 10**5, 10**6)
    assert factorial_block_ends(5) == (2, 6, 24, 120, 720)
    ends = ratio_block_ends(40, Fraction(5, 4))
    assert all(b > a for a, b in zip(ends, ends[1:]))
    with pytest.raises(ValueError):
        BlockL0U1((3, 3))


def test_block_sure_inequalities_per_run():
    rule = preset("block")
    for seed in range(5):
        hats = _hats(rule, 10**4, seed)
        cum = np.cumsum(rule.correct_bits(hats, 10**4))
        for j, hit in enumerate(rule.events(hats, 8)):
            s, e = rule.starts[j], rule.ends[j]
            if hit:
                assert Fraction(int(cum[e - 1]), e) >= 1 - Fraction(s, e)
            else:
                assert Fraction(int(cum[e - 1]), e) <= Fraction(s, e)


@given(st.integers(1, 10**6))
def test_nth_non_square_matches_brute_force_order(a):
    p = nth_non_square(a)
    assert not is_square(p)
    assert p - squares_upto(p) == a


def test_nth_non_square_prefix():
    brute = [p for p in range(1, 2000) if not is_square(p)]
    assert [nth_non_square(a) for a in range(1, len(brute) + 1)] == brute


def test_point_law_validation_and_inverse_cdf():
    law = PointLaw(((Fraction(1, 4), (Fraction(0), Fraction(1))), (Fraction(3, 4), (Fraction(1, 2), Fraction(1, 2)))))
    assert law.inverse_cdf(Fraction(0)) == (0, 1)
    assert law.inverse_cdf(Fraction(1, 4)) == (Fraction(1, 2), Fraction(1, 2))
    assert law.inverse_cdf(Fraction(99, 100)) == (Fraction(1, 2), Fraction(1, 2))
    for bad in [((Fraction(1, 2), (0, 1)),), ((Fraction(1), (Fraction(3, 4), 1)),), ((Fraction(1), (0, Fraction(1, 4))),)]:
        with pytest.raises(ValueError):
            PointLaw(bad)


def test_mixed_dispatch_uses_leading_noise_bit():
    rule = preset("mixed")
    target0, _ = rule.dispatch([0] + [1] * 52)
    target1, inner = rule.dispatch([1] + [0] * 52)
    assert target0 == (0, 1)
    assert target1 == (Fraction(1, 2), Fraction(1, 2)) and isinstance(inner, Pairs)


def test_mixed_square_players_guess_zero():
    rule = preset("mixed")
    hats = _hats(rule, rule.horizon(400), 5)
    assert all(rule.guess(m * m, hats) == 0 for m in range(1, 21))
    assert all(m * m in rule.window(2) for m in range(1, 54))


def test_countable_union_bound_and_guess_range():
    eps = Fraction(1, 10)
    assert sum(Fraction(1, countable_K(eps, i)) for i in range(1, 200)) <= eps / 2
    rule = CountableColorGuess(eps, seed=3)
    for i in (1, 10, 70, 100):
        assert 0 <= rule.guess(i, None) < rule.K(i)


def test_splitmix_scalar_matches_array():
    xs = np.array([0, 1, 2**40, 2**64 - 1], dtype=np.uint64)
    assert splitmix64_array(xs).tolist() == [splitmix64(int(x)) for x in xs]


def test_team_mode_alternating():
    rule = TeamStrategy(generate_plan(Fraction(3, 4), 5), mode="alternating")
    assert [rule.team_mode(t) for t in rule.plan.teams] == ["win", "lose", "win", "lose", "win"]
    with pytest.raises(ValueError):
        TeamStrategy(rule.plan, mode="sideways")


def test_team_events_match_block_parities():
    rule = TeamStrategy(generate_plan(Fraction(3, 4), 6))
    hats = _hats(rule, 3000, 11)
    ev = rule.events(hats)
    for t in rule.plan.teams:
        if t.k in ev:
            par = [int(hats[a - 1:b].sum()) % 2 for a, b in (t.block_range(j) for j in range(1, t.b + 1))]
            assert ev[t.k] == all(p == 0 for p in par)


def test_unknown_spec_kind():
    with pytest.raises(ValueError):
        strategy_from_spec({"kind": "telepathy"})
    with pytest.raises(ValueError):
        preset("nope")


def test_mixed_needs_noise():
    with pytest.raises(ValueError):
        MixedStrategy(PointLaw(((Fraction(1), (Fraction(1, 2), Fraction(1, 2))),)), noise_bits=0)
