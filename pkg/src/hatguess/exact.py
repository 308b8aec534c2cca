"""Exhaustive exact analysis of finite games with rational arithmetic."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .core import ColorSpace, HatAssignment, Tail, ceil_div, is_square
from .strategies import GuessRule, MixedStrategy, dispatched_rule

SIZE_GUARD = 2**24
WINDOW_GUARD = 2**20

MAX_ALL_CORRECT = "all-correct"
MAX_GUARANTEED = "guaranteed-fraction"


class SizeGuardError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteStrategyTable:
    """Full tables ``f_i : C^(n-1) -> C``.

    Row ``i`` is indexed by the other players' colors written little-endian in
    base ``K`` (the lowest-numbered other player is the least significant
    digit).
    """

    n: int
    K: int
    tables: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or self.K < 2:
            raise ValueError("need n >= 1 and K >= 2")
        if len(self.tables) != self.n:
            raise ValueError("one table per player")
        size = self.K ** (self.n - 1)
        for t in self.tables:
            if len(t) != size or any(not 0 <= c < self.K for c in t):
                raise ValueError(f"each table needs {size} entries in 0..{self.K - 1}")

    def others_index(self, i: int, hats) -> int:
        idx, w = 0, 1
        for p in range(1, self.n + 1):
            if p == i:
                continue
            idx += int(hats[p - 1]) * w
            w *= self.K
        return idx

    def guess(self, i: int, hats) -> int:
        return self.tables[i - 1][self.others_index(i, hats)]

    def correct_matrix(self) -> np.ndarray:
        """``(n, K^n)`` boolean matrix: player ``i`` correct on assignment ``a``."""
        K, n = self.K, self.n
        a = np.arange(K**n, dtype=np.int64)
        out = np.empty((n, K**n), dtype=bool)
        for i in range(n):
            low = a % K**i
            own = (a // K**i) % K
            high = a // K ** (i + 1)
            table = np.asarray(self.tables[i], dtype=np.int64)
            out[i] = table[low + high * K**i] == own
        return out


Strategy = Union[FiniteStrategyTable, GuessRule]


def table_from_rule(rule: GuessRule, n: int, K: int | None = None) -> FiniteStrategyTable:
    """Tabulate players ``1..n`` of ``rule``; hats past ``n`` are black (0)."""
    K = K or rule.space.K or 2
    if n * K ** (n - 1) > SIZE_GUARD:
        raise SizeGuardError(f"table for n={n}, K={K} too large")
    H = max(n, rule.horizon(n))
    tables = []
    for i in range(1, n + 1):
        row = []
        hats = np.zeros(H, dtype=np.int64)
        others = [p for p in range(1, n + 1) if p != i]
        for cfg in itertools.product(range(K), repeat=n - 1):
            # little-endian: first other player is least significant
            for p, c in zip(others, reversed(cfg)):
                hats[p - 1] = c
            row.append(int(rule.guess(i, hats)))
        tables.append(tuple(row))
    return FiniteStrategyTable(n, K, tuple(tables))


@dataclass(frozen=True)
class ExactDistribution:
    """Law of the fraction of correct players; keys and values are exact."""

    n: int
    pmf: dict[Fraction, Fraction]

    def __post_init__(self):
        if sum(self.pmf.values()) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        for v in self.pmf:
            if not 0 <= v <= 1 or self.n % v.denominator:
                raise ValueError(f"support value {v} impossible for n={self.n}")

    def prob(self, v) -> Fraction:
        return self.pmf.get(Fraction(v), Fraction(0))

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.pmf.items()), Fraction(0))

    def tail(self, alpha) -> Fraction:
        """``P(Zbar >= alpha)``."""
        return sum((p for v, p in self.pmf.items() if v >= alpha), Fraction(0))

    def to_rows(self) -> list[tuple[str, int, int]]:
        return [(str(v), p.numerator, p.denominator) for v, p in sorted(self.pmf.items())]


def _as_table(strategy: Strategy, n: int | None) -> FiniteStrategyTable:
    if isinstance(strategy, FiniteStrategyTable):
        return strategy
    if n is None:
        raise ValueError("n is required for a guess rule")
    return table_from_rule(strategy, n)


def exact_distribution(strategy: Strategy, n: int | None = None) -> ExactDistribution:
    """Enumerate all ``K^n`` equally likely assignments."""
    if n is not None and n < 1:
        raise ValueError("n must be >= 1")
    table = _as_table(strategy, n)
    if table.K**table.n > SIZE_GUARD:
        raise SizeGuardError(f"K^n = {table.K ** table.n} exceeds {SIZE_GUARD}")
    counts = table.correct_matrix().sum(axis=0)
    hist = np.bincount(counts, minlength=table.n + 1)
    total = table.K**table.n
    pmf = {Fraction(c, table.n): Fraction(int(m), total) for c, m in enumerate(hist) if m}
    return ExactDistribution(table.n, pmf)


def _window_config_hats(rule: GuessRule, i: int, seed: int = 0):
    """Window players, and a background hat vector with random colors outside
    the window so that an under-declared window shows up."""
    window = sorted(rule.window(i) - {i})
    H = max([i, rule.horizon(i)] + window)
    K = rule.space.K or 2
    rng = np.random.default_rng([seed, i])
    hats = rng.integers(0, K, size=H + 1, dtype=np.int64)
    return window, hats, K


def player_correct_probability(rule: GuessRule, i: int) -> Fraction:
    """``P(Z_i = 1)`` by enumerating the window and the player's own hat."""
    window, hats, K = _window_config_hats(rule, i)
    if K ** (len(window) + 1) > WINDOW_GUARD:
        raise SizeGuardError(f"window of player {i} too large ({len(window)})")
    hits = 0
    for cfg in itertools.product(range(K), repeat=len(window)):
        hats[[p - 1 for p in window]] = cfg
        for own in range(K):
            hats[i - 1] = own
            hits += int(rule.guess(i, hats)) == own
    return Fraction(hits, K ** (len(window) + 1))


def exact_mean(strategy: Strategy, n: int | None = None) -> Fraction:
    """``E[Zbar]`` over players ``1..n``.

    Tables are enumerated in full; guess rules player-by-player over their
    windows, so large ``n`` stays cheap for small windows.
    """
    if isinstance(strategy, FiniteStrategyTable):
        return exact_distribution(strategy).mean()
    if n is None or n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(strategy, MixedStrategy):
        return _mixed_mean(strategy, n)
    return sum((player_correct_probability(strategy, i) for i in range(1, n + 1)), Fraction(0)) / n


def dispatch_probabilities(mixed: MixedStrategy) -> list[tuple[Fraction, tuple[Fraction, Fraction]]]:
    """Exact law of the dispatched target: the noise value is uniform on the
    ``2^B`` dyadic points ``m / 2^B``."""
    scale = 2**mixed.B
    out, prev = [], 0
    cum = mixed.law.cumulative
    for j, (_, target) in enumerate(mixed.law.atoms):
        hi = scale if j == len(cum) - 1 else min(scale, ceil_div(cum[j].numerator * scale, cum[j].denominator))
        out.append((Fraction(hi - prev, scale), target))
        prev = hi
    return out


def _mixed_mean(mixed: MixedStrategy, n: int) -> Fraction:
    # active guesses depend on the noise only through the dispatched target,
    # and the noise hats are independent of the active hats
    total = Fraction(0)
    law = dispatch_probabilities(mixed)
    for i in range(1, n + 1):
        if is_square(i):
            total += Fraction(1, 2)
            continue
        a = mixed.active_index(i)
        total += sum((w * player_correct_probability(dispatched_rule(t, mixed.num_teams, mixed.eps_scale), a)
                      for w, t in law if w), Fraction(0))
    return total / n


@dataclass
class IndependenceReport:
    player: int
    expected: Fraction
    conditionals: dict[tuple[int, ...], Fraction] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v == self.expected for v in self.conditionals.values())

    @property
    def failures(self):
        return {c: v for c, v in self.conditionals.items() if v != self.expected}

    def to_dict(self) -> dict:
        return {"player": self.player, "passed": self.passed, "expected": str(self.expected),
                "configurations": len(self.conditionals),
                "failures": {",".join(map(str, c)): str(v) for c, v in self.failures.items()}}


def verify_independence(strategy: Strategy, i: int, n: int | None = None) -> IndependenceReport:
    """Conditional ``P(Z_i = 1)`` given each configuration of the other hats
    player ``i`` can see; must be ``1/K`` everywhere."""
    if isinstance(strategy, FiniteStrategyTable):
        K, N = strategy.K, strategy.n
        if K**N > SIZE_GUARD:
            raise SizeGuardError("game too large")
        rep = IndependenceReport(i, Fraction(1, K))
        hats = [0] * N
        others = [p for p in range(1, N + 1) if p != i]
        for cfg in itertools.product(range(K), repeat=N - 1):
            for p, c in zip(others, cfg):
                hats[p - 1] = c
            hits = 0
            for own in range(K):
                hats[i - 1] = own
                hits += strategy.guess(i, hats) == own
            rep.conditionals[cfg] = Fraction(hits, K)
        return rep
    window, hats, K = _window_config_hats(strategy, i)
    if K ** (len(window) + 1) > WINDOW_GUARD:
        raise SizeGuardError(f"window of player {i} too large")
    rep = IndependenceReport(i, Fraction(1, K))
    for cfg in itertools.product(range(K), repeat=len(window)):
        hats[[p - 1 for p in window]] = cfg
        hits = 0
        for own in range(K):
            hats[i - 1] = own
            hits += int(strategy.guess(i, hats)) == own
        rep.conditionals[cfg] = Fraction(hits, K)
    return rep


def _binary_function_tables(n: int):
    """Correctness vectors, over all ``2^n`` assignments, of every function
    ``f_i : {0,1}^(n-1) -> {0,1}`` for every player."""
    m = 2 ** (n - 1)
    a = np.arange(2**n)
    out = []
    for i in range(n):
        own = (a >> i) & 1
        idx = (a & ((1 << i) - 1)) | ((a >> (i + 1)) << i)
        funcs = np.array(list(itertools.product((0, 1), repeat=m)), dtype=np.int64)
        out.append(funcs[:, idx] == own)
    return out


def _flip_index(n: int) -> list[np.ndarray]:
    """For each player, the function id of ``x -> 1 - f(~x)``."""
    m = 2 ** (n - 1)
    funcs = list(itertools.product((0, 1), repeat=m))
    pos = {f: j for j, f in enumerate(funcs)}
    flipped = [pos[tuple(1 - f[m - 1 - x] for x in range(m))] for f in funcs]
    return [np.array(flipped)] * n


def _max_independent_hypercube(n: int) -> tuple[int, list[int]]:
    """Largest set of vertices of the ``n``-cube with no two at Hamming
    distance 1 (branch and bound)."""
    V = 2**n
    nbr = [sum(1 << (v ^ (1 << i)) for i in range(n)) for v in range(V)]
    best = [0, 0]

    def rec(cand: int, chosen: int, size: int):
        if size + bin(cand).count("1") <= best[0]:
            return
        if not cand:
            best[:] = [size, chosen]
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & ~(1 << v) & ~nbr[v], chosen | (1 << v), size + 1)
        rec(cand & ~(1 << v), chosen, size)

    rec((1 << V) - 1, 0, 0)
    return best[0], [v for v in range(V) if best[1] >> v & 1]


def _table_from_set(n: int, S: list[int]) -> FiniteStrategyTable:
    # player i guesses the own color completing a member of S, else 0
    Sset = set(S)
    tables = []
    for i in range(n):
        row = []
        for idx in range(2 ** (n - 1)):
            low = idx & ((1 << i) - 1)
            high = (idx >> i) << (i + 1)
            guess = 0
            for own in (0, 1):
                if (low | high | (own << i)) in Sset:
                    guess = own
            row.append(guess)
        tables.append(tuple(row))
    return FiniteStrategyTable(n, 2, tuple(tables))


def search_strategy_space(n: int, objective: str = MAX_ALL_CORRECT) -> tuple[Fraction, FiniteStrategyTable]:
    """Exact optimum over all binary strategies for ``n`` players.

    ``n <= 3``: every strategy tuple up to the global color flip
    ``f_i(x) -> 1 - f_i(~x)``, which preserves both objectives.
    ``n = 4`` with ``all-correct``: the all-correct set of any strategy has no
    two assignments differing in one hat, and any such set is attainable, so
    the optimum is the hypercube's independence number over ``2^n``.
    """
    if objective not in (MAX_ALL_CORRECT, MAX_GUARANTEED):
        raise ValueError(f"unknown objective {objective!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 4 and objective == MAX_ALL_CORRECT:
        size, S = _max_independent_hypercube(n)
        return Fraction(size, 2**n), _table_from_set(n, S)
    if n > 3:
        raise SizeGuardError(f"n={n} too large for exhaustive search")
    corr = _binary_function_tables(n)
    flip = _flip_index(n)
    nf = corr[0].shape[0]
    best, witness = None, None
    for ids in itertools.product(range(nf), repeat=n):
        mirror = tuple(int(flip[i][f]) for i, f in enumerate(ids))
        if mirror < ids:
            continue
        counts = sum(corr[i][f].astype(np.int64) for i, f in enumerate(ids))
        if objective == MAX_ALL_CORRECT:
            val = Fraction(int(np.count_nonzero(counts == n)), 2**n)
        else:
            val = Fraction(int(counts.min()), n)
        if best is None or val > best:
            best, witness = val, ids
    m = 2 ** (n - 1)
    funcs = list(itertools.product((0, 1), repeat=m))
    return best, FiniteStrategyTable(n, 2, tuple(funcs[f] for f in witness))


def adversarial_tail_black_search(strategy: Strategy, n: int) -> tuple[HatAssignment, int]:
    """Among the ``K^n`` assignments with players past ``n`` black, one with
    the most wrong guesses among players ``1..n`` (lexicographically smallest
    on ties).  Averaging guarantees at least ``ceil(n/2)``."""
    if not 1 <= n <= 24:
        raise SizeGuardError("n must be in 1..24")
    if isinstance(strategy, FiniteStrategyTable):
        if strategy.n != n or strategy.K != 2:
            raise ValueError("table must be a binary n-player game")
        wrong = n - strategy.correct_matrix().sum(axis=0)
        worst, prefix = -1, None
        for cfg in itertools.product((0, 1), repeat=n):
            a = sum(x << i for i, x in enumerate(cfg))
            if wrong[a] > worst:
                worst, prefix = int(wrong[a]), np.array(cfg, dtype=np.uint8)
    else:
        K = strategy.space.K if strategy.space.is_finite else None
        if K is None or K**n > SIZE_GUARD:
            raise SizeGuardError("tail-black search needs a small finite color space")
        H = max(n, strategy.horizon(n))
        hats = np.zeros(H, dtype=np.int64)
        worst, prefix = -1, None
        for cfg in itertools.product(range(K), repeat=n):
            hats[:n] = cfg
            w = n - int(np.count_nonzero(strategy.correct_bits(hats, n)))
            if w > worst:
                worst, prefix = w, np.array(cfg, dtype=np.int64)
    space = strategy.space if isinstance(strategy, GuessRule) else ColorSpace.binary()
    witness = HatAssignment(space, prefix, Tail.CONSTANT_BLACK)
    if worst < -(-n // 2):
        raise AssertionError(f"averaging bound violated: {worst} < ceil({n}/2)")
    return witness, worst
