import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hatguess import exact
from hatguess.exact import ExactDistribution, FiniteStrategyTable, SizeGuardError
from hatguess.strategies import PRESETS, Constant, ModKSum, OracleCheat, Pairs, preset

HALF = Fraction(1, 2)


def brute_distribution(table: FiniteStrategyTable) -> dict:
    """Oracle: loop over assignments calling ``guess`` one player at a time."""
    counts = {}
    for cfg in itertools.product(range(table.K), repeat=table.n):
        c = sum(table.guess(i, cfg) == cfg[i - 1] for i in range(1, table.n + 1))
        counts[Fraction(c, table.n)] = counts.get(Fraction(c, table.n), 0) + 1
    total = table.K**table.n
    return {v: Fraction(m, total) for v, m in counts.items()}


@st.composite
def tables(draw, max_n=4, max_K=3):
    n = draw(st.integers(1, max_n))
    K = draw(st.integers(2, max_K))
    size = K ** (n - 1)
    rows = tuple(tuple(draw(st.lists(st.integers(0, K - 1), min_size=size, max_size=size))) for _ in range(n))
    return FiniteStrategyTable(n, K, rows)


@given(tables())
def test_vectorized_distribution_matches_brute_force(table):
    assert exact.exact_distribution(table).pmf == brute_distribution(table)


@given(tables())
def test_every_table_has_mean_one_over_K(table):
    assert exact.exact_distribution(table).mean() == Fraction(1, table.K)


@given(tables(), st.fractions(Fraction(1, 10), 1))
def test_markov_consistency(table, alpha):
    d = exact.exact_distribution(table)
    assert d.tail(alpha) <= d.mean() / alpha


@settings(max_examples=30)
@given(tables(max_n=3, max_K=2))
def test_independence_holds_for_any_table(table):
    for i in range(1, table.n + 1):
        assert exact.verify_independence(table, i).passed


@pytest.mark.parametrize("n", range(2, 7))
def test_even_odd_and_pairs(n):
    d = exact.exact_distribution(preset("even-odd", n), n)
    assert d.pmf == {Fraction(0): HALF, Fraction(1): HALF}
    if n % 2 == 0:
        assert exact.exact_distribution(Pairs(), n).pmf == {HALF: 1}


def test_constant_is_binomial():
    d = exact.exact_distribution(Constant(), 3)
    assert d.pmf == {Fraction(0): Fraction(1, 8), Fraction(1, 3): Fraction(3, 8),
                     Fraction(2, 3): Fraction(3, 8), Fraction(1): Fraction(1, 8)}


@pytest.mark.parametrize("name", [n for n in PRESETS if preset(n).space.is_finite])
def test_exact_mean_matches_table_enumeration(name):
    rule = preset(name)
    want = Fraction(1, rule.space.K)
    assert exact.exact_mean(rule, 5) == want
    if name != "mixed":
        assert exact.exact_distribution(rule, 5).mean() == want


def test_mod_k_sum_all_correct():
    for K in (2, 3, 4):
        assert exact.exact_distribution(ModKSum(K, 0, group=2 * K), 2 * K).prob(1) == Fraction(1, K)


def test_distribution_validation():
    with pytest.raises(ValueError):
        ExactDistribution(2, {HALF: HALF})
    with pytest.raises(ValueError):
        ExactDistribution(2, {Fraction(1, 3): Fraction(1)})
    with pytest.raises(ValueError):
        FiniteStrategyTable(2, 2, ((0, 0),))


def test_size_guards():
    with pytest.raises(SizeGuardError):
        exact.exact_distribution(Pairs(), 40)
    with pytest.raises(SizeGuardError):
        exact.search_strategy_space(5)
    with pytest.raises(SizeGuardError):
        exact.search_strategy_space(4, exact.MAX_GUARANTEED)
    with pytest.raises(ValueError):
        exact.search_strategy_space(2, "fun")


@pytest.mark.parametrize("n", [2, 3])
def test_search_optimum_and_witness(n):
    best, table = exact.search_strategy_space(n, exact.MAX_ALL_CORRECT)
    assert best == HALF and exact.exact_distribution(table).prob(1) == HALF
    best, table = exact.search_strategy_space(n, exact.MAX_GUARANTEED)
    assert best <= HALF and min(exact.exact_distribution(table).pmf) == best
    assert best == Fraction(n // 2, n)


def test_search_n4_all_correct():
    best, table = exact.search_strategy_space(4, exact.MAX_ALL_CORRECT)
    assert best == HALF and exact.exact_distribution(table).prob(1) == HALF


def _brute_independence_number(n):
    V = 2**n
    for size in range(V, 0, -1):
        for S in itertools.combinations(range(V), size):
            if all(bin(a ^ b).count("1") != 1 for a, b in itertools.combinations(S, 2)):
                return size
    return 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hypercube_independence_number(n):
    size, S = exact._max_independent_hypercube(n)
    assert size == _brute_independence_number(n) == 2 ** (n - 1)
    assert all(bin(a ^ b).count("1") != 1 for a, b in itertools.combinations(S, 2))


def test_independence_fails_for_cheat():
    rep = exact.verify_independence(OracleCheat(), 1)
    assert not rep.passed and rep.failures


def test_player_probability_matches_window_enumeration():
    assert exact.player_correct_probability(preset("even-odd"), 3) == HALF
    assert exact.player_correct_probability(preset("mod-k-sum"), 2) == Fraction(1, 3)


def test_tail_black_search_values():
    _, w = exact.adversarial_tail_black_search(Pairs(), 8)
    assert w == 4
    witness, w = exact.adversarial_tail_black_search(preset("even-odd", 8), 8)
    assert w == 8 and witness.hat(100) == 0


@settings(max_examples=40)
@given(tables(max_n=4, max_K=2))
def test_tail_black_search_meets_averaging_bound(table):
    witness, wrong = exact.adversarial_tail_black_search(table, table.n)
    assert wrong >= -(-table.n // 2)
    cfg = [int(x) for x in witness.prefix]
    assert table.n - sum(table.guess(i, cfg) == cfg[i - 1] for i in range(1, table.n + 1)) == wrong


def test_dispatch_probabilities_exact_and_close():
    mixed = preset("mixed")
    assert [w for w, _ in exact.dispatch_probabilities(mixed)] == [HALF, HALF]
    from hatguess.strategies import MixedStrategy, PointLaw
    third = PointLaw(((Fraction(1, 3), (Fraction(0), Fraction(1))), (Fraction(2, 3), (HALF, HALF))))
    probs = exact.dispatch_probabilities(MixedStrategy(third, noise_bits=20))
    assert sum(w for w, _ in probs) == 1
    assert abs(probs[0][0] - Fraction(1, 3)) <= Fraction(1, 2**20)


def test_table_from_rule_uses_black_tail():
    table = exact.table_from_rule(preset("even-odd"), 2)
    assert table.tables == ((0, 1), (0, 1))
    assert np.array_equal(table.correct_matrix().sum(axis=0), [2, 0, 0, 2])
