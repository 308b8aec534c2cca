"""Constructive guessing strategies.

Every rule declares a finite visibility window per player and exposes two
evaluation paths that must agree:

* ``guess(i, hats)`` evaluates a single player (hats of player ``p`` at
  ``hats[p - 1]``); it is the reference used by the exact analyzer.
* ``correct_bits(hats, N)`` evaluates players ``1..N`` at once with numpy and
  is what the simulator uses.  ``hats`` must hold at least ``horizon(N)`` hats.

Specs serialize as ``{"kind": str, "params": dict}``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import ColorSpace, dyadic_value, is_square
from .plan import HALF, LOSE, WIN, TeamPlan, generate_plan

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def _coin_key(seed: int, player: int) -> int:
    return (seed * 0x100000001B3 + player) & MASK64


def _pairs_correct(h: np.ndarray, out: np.ndarray, start: int = 0) -> None:
    """Pairs play on ``h[start:]`` (even length): odd member guesses its
    partner's color, even member guesses the opposite of its partner's."""
    a = h[start::2]
    b = h[start + 1 :: 2]
    m = min(a.size, b.size)
    out[start : start + 2 * m : 2] = a[:m] == b[:m]
    out[start + 1 : start + 2 * m : 2] = a[:m] != b[:m]


def _pairs_guess(i: int, hats, offset: int = 0) -> int:
    # players offset+1, offset+2 form the first pair
    if (i - offset) % 2 == 1:
        return int(hats[i])
    return 1 - int(hats[i - 2])


def _pairs_window(i: int, offset: int = 0) -> frozenset[int]:
    return frozenset({i + 1 if (i - offset) % 2 == 1 else i - 1})


def _round_even(N: int, offset: int = 0) -> int:
    return N + ((N - offset) % 2)


class GuessRule:
    """Base class for strategies."""

    kind: str = ""
    space: ColorSpace = ColorSpace.binary()
    valid: bool = True

    def window(self, i: int) -> frozenset[int]:
        raise NotImplementedError

    def guess(self, i: int, hats):
        raise NotImplementedError

    def horizon(self, N: int) -> int:
        return N

    def correct_bits(self, hats: np.ndarray, N: int) -> np.ndarray:
        """Reference implementation via :meth:`guess`; subclasses vectorize."""
        return np.array([self.guess(i, hats) == hats[i - 1] for i in range(1, N + 1)], dtype=bool)

    def params(self) -> dict:
        return {}

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class Constant(GuessRule):
    kind = "constant"

    def __init__(self, c: int = 0, K: int = 2):
        if not 0 <= c < K:
            raise ValueError("color out of range")
        self.c, self.K = c, K
        self.space = ColorSpace.finite(K)

    def window(self, i):
        return frozenset()

    def guess(self, i, hats):
        return self.c

    def correct_bits(self, hats, N):
        return np.asarray(hats[:N]) == self.c

    def params(self):
        return {"c": self.c, "K": self.K}


class IndependentRandom(GuessRule):
    """Each player guesses a fixed pseudo-random color drawn from
    ``splitmix64(seed, player)``; nothing is read from other hats."""

    kind = "independent_random"

    def __init__(self, seed: int = 0, K: int = 2):
        self.seed, self.K = seed, K
        self.space = ColorSpace.finite(K)

    def window(self, i):
        return frozenset()

    def guess(self, i, hats):
        return splitmix64(_coin_key(self.seed, i)) % self.K

    def guesses(self, N: int) -> np.ndarray:
        keys = (np.arange(1, N + 1, dtype=np.uint64)
                + np.uint64((self.seed * 0x100000001B3) & MASK64))
        return (splitmix64_array(keys) % np.uint64(self.K)).astype(np.int64)

    def correct_bits(self, hats, N):
        return np.asarray(hats[:N]) == self.guesses(N)

    def params(self):
        return {"seed": self.seed, "K": self.K}


class ModKSum(GuessRule):
    """Consecutive groups of ``group`` players; everyone guesses the color that
    makes the group's color sum congruent to ``c`` mod ``K``.  ``K = 2, c = 0``
    is the even-odd strategy."""

    kind = "mod_k_sum"

    def __init__(self, K: int = 2, c: int = 0, group: int = 4):
        if K < 2:
            raise ValueError("K must be >= 2")
        if group < 1:
            raise ValueError("group size must be >= 1")
        self.K, self.c, self.group = K, c % K, group
        self.space = ColorSpace.finite(K)

    def _bounds(self, i):
        start = (i - 1) // self.group * self.group
        return start + 1, start + self.group

    def window(self, i):
        lo, hi = self._bounds(i)
        return frozenset(range(lo, hi + 1)) - {i}

    def guess(self, i, hats):
        lo, hi = self._bounds(i)
        seen = sum(int(hats[p - 1]) for p in range(lo, hi + 1) if p != i)
        return (self.c - seen) % self.K

    def horizon(self, N):
        return self._bounds(N)[1]

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        sums = np.asarray(hats[:H], dtype=np.int64).reshape(-1, self.group).sum(axis=1)
        ok = (sums % self.K) == self.c
        return np.repeat(ok, self.group)[:N]

    def params(self):
        return {"K": self.K, "c": self.c, "group": self.group}


class EvenOdd(ModKSum):
    kind = "even_odd"

    def __init__(self, group: int = 4):
        super().__init__(2, 0, group)

    def params(self):
        return {"group": self.group}


class Pairs(GuessRule):
    kind = "pairs"

    def window(self, i):
        return _pairs_window(i)

    def guess(self, i, hats):
        return _pairs_guess(i, hats)

    def horizon(self, N):
        return _round_even(N)

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        out = np.empty(H, dtype=bool)
        _pairs_correct(np.asarray(hats[:H]), out)
        return out[:N]


class ModKGroups(GuessRule):
    """Groups of ``K`` consecutive players; member ``j`` guesses as if the
    group sum were ``j - 1`` mod ``K``.  Exactly one member is right."""

    kind = "mod_k_groups"

    def __init__(self, K: int = 3, group: int | None = None):
        if K < 2:
            raise ValueError("K must be >= 2")
        if group is not None and group != K:
            raise ValueError("group size must equal K")
        self.K = K
        self.space = ColorSpace.finite(K)

    def window(self, i):
        start = (i - 1) // self.K * self.K
        return frozenset(range(start + 1, start + self.K + 1)) - {i}

    def guess(self, i, hats):
        start = (i - 1) // self.K * self.K
        j = i - start
        seen = sum(int(hats[p]) for p in range(start, start + self.K) if p != i - 1)
        return (j - 1 - seen) % self.K

    def horizon(self, N):
        return -(-N // self.K) * self.K

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        sums = np.asarray(hats[:H], dtype=np.int64).reshape(-1, self.K).sum(axis=1) % self.K
        member = np.tile(np.arange(self.K), H // self.K)
        return (np.repeat(sums, self.K) == member)[:N]

    def params(self):
        return {"K": self.K}


def geometric_block_ends(num_blocks: int = 10, ratio: int = 10, head: int = 5) -> tuple[int, ...]:
    """Block end points: ``head`` blocks of two players, then each end ``ratio``
    times the previous one, so late blocks satisfy
    ``n_{j-1}/n_j = 1/ratio``."""
    if num_blocks < 1 or head < 0 or head > num_blocks or ratio < 2:
        raise ValueError("bad block schedule")
    ends = [2 * (j + 1) for j in range(head)]
    last = ends[-1] if ends else 1
    while len(ends) < num_blocks:
        last *= ratio
        ends.append(last)
    return tuple(ends)


def factorial_block_ends(num_blocks: int = 8) -> tuple[int, ...]:
    return tuple(math.factorial(j + 1) for j in range(1, num_blocks + 1))


def ratio_block_ends(num_blocks: int, ratio: Fraction, first: int = 2) -> tuple[int, ...]:
    """Ends growing by a constant factor ``ratio`` (rounded up, strictly increasing)."""
    ends = [first]
    while len(ends) < num_blocks:
        ends.append(max(ends[-1] + 1, math.ceil(ends[-1] * Fraction(ratio))))
    return tuple(ends)


class BlockL0U1(GuessRule):
    """Even-odd inside consecutive blocks ending at ``ends``; players after the
    last block play pairs."""

    kind = "block_l0u1"

    def __init__(self, ends=None):
        ends = tuple(int(e) for e in (ends if ends is not None else geometric_block_ends()))
        if not ends or ends[0] < 1 or any(b <= a for a, b in zip(ends, ends[1:])):
            raise ValueError("block ends must be strictly increasing positive integers")
        self.ends = ends
        self.starts = (0,) + ends[:-1]

    @property
    def last(self) -> int:
        return self.ends[-1]

    def block_of(self, i: int) -> int | None:
        j = bisect.bisect_left(self.ends, i)
        return j if j < len(self.ends) else None

    def window(self, i):
        j = self.block_of(i)
        if j is None:
            return _pairs_window(i, self.last)
        return frozenset(range(self.starts[j] + 1, self.ends[j] + 1)) - {i}

    def guess(self, i, hats):
        j = self.block_of(i)
        if j is None:
            return _pairs_guess(i, hats, self.last)
        seen = sum(int(hats[p]) for p in range(self.starts[j], self.ends[j]) if p != i - 1)
        return seen % 2

    def horizon(self, N):
        j = self.block_of(N)
        return _round_even(N, self.last) if j is None else self.ends[j]

    def block_parities(self, hats, nblocks: int) -> np.ndarray:
        cs = np.concatenate(([0], np.cumsum(hats[: self.ends[nblocks - 1]], dtype=np.int64)))
        e = np.array(self.ends[:nblocks])
        s = np.array(self.starts[:nblocks])
        return (cs[e] - cs[s]) % 2

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        out = np.empty(H, dtype=bool)
        nb = bisect.bisect_left(self.ends, min(N, self.last)) + 1
        par = self.block_parities(hats, nb)
        lengths = np.diff(np.array((0,) + self.ends[:nb]))
        out[: self.ends[nb - 1]] = np.repeat(par == 0, lengths)
        if H > self.last:
            _pairs_correct(np.asarray(hats[:H]), out, self.last)
        return out[:N]

    def events(self, hats, nblocks: int) -> np.ndarray:
        """Indicator of each block being entirely correct."""
        return self.block_parities(hats, nblocks) == 0

    def params(self):
        return {"ends": list(self.ends)}


class TeamStrategy(GuessRule):
    """Gambler/recovery teams driven by a :class:`TeamPlan`.

    ``mode`` is ``"win"``, ``"lose"``, ``"alternating"`` (even teams win, odd
    teams lose) or ``None`` to follow each team's own mode from the plan.
    Players past the plan's horizon play pairs.
    """

    kind = "team"

    def __init__(self, plan: TeamPlan, mode: str | None = None):
        if mode not in (None, WIN, LOSE, "alternating"):
            raise ValueError(f"unknown mode {mode!r}")
        self.plan, self.mode = plan, mode

    def team_mode(self, team) -> str:
        if self.mode is None:
            return team.mode
        if self.mode == "alternating":
            return WIN if team.k % 2 == 0 else LOSE
        return self.mode

    def _locate(self, i):
        t = self.plan.team_of(i)
        if t is None:
            return None, None
        off = i - t.n
        if off <= t.g:
            return t, (off - 1) // t.s + 1
        return t, None

    def window(self, i):
        t, j = self._locate(i)
        if j is None:
            return _pairs_window(i)
        _, last = t.block_range(j)
        return frozenset(range(t.n + 1, last + 1)) - {i}

    def _triggered(self, t, j, parity_of) -> bool:
        want = 0 if self.team_mode(t) == WIN else 1
        return all(parity_of(jj) == want for jj in range(1, j))

    def guess(self, i, hats):
        t, j = self._locate(i)
        if j is None:
            return _pairs_guess(i, hats)

        def parity_of(jj):
            a, b = t.block_range(jj)
            return sum(int(hats[p - 1]) for p in range(a, b + 1)) % 2

        if self._triggered(t, j, parity_of):
            a, b = t.block_range(j)
            return sum(int(hats[p - 1]) for p in range(a, b + 1) if p != i) % 2
        return _pairs_guess(i, hats)

    def horizon(self, N):
        t, j = self._locate(N)
        if j is None:
            return _round_even(N)
        return t.block_range(j)[1]

    def team_parities(self, hats, t, cs=None) -> np.ndarray:
        if cs is None:
            cs = np.concatenate(([0], np.cumsum(hats[: t.n + t.g], dtype=np.int64)))
        starts = t.n + t.s * np.arange(t.b)
        return (cs[starts + t.s] - cs[starts]) % 2

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        h = np.asarray(hats[:H])
        out = np.empty(H, dtype=bool)
        _pairs_correct(h, out)
        cs = np.concatenate(([0], np.cumsum(h, dtype=np.int64)))
        for t in self.plan.teams:
            if t.n >= H:
                break
            if t.g == 0:
                continue
            # a horizon never cuts a gambler block
            nblocks = min(t.b, -(-(H - t.n) // t.s))
            starts = t.n + t.s * np.arange(nblocks)
            par = (cs[starts + t.s] - cs[starts]) % 2
            want = 0 if self.team_mode(t) == WIN else 1
            miss = np.nonzero(par != want)[0]
            played = nblocks if miss.size == 0 else min(nblocks, int(miss[0]) + 1)
            for jj in range(played):
                a = t.n + jj * t.s
                out[a : a + t.s] = par[jj] == 0
        return out[:N]

    def events(self, hats, teams=None) -> dict[int, bool]:
        """``A_k``: every gambler block of team ``k`` has an even (win) or odd
        (lose) white count.  Only teams with gamblers fully inside ``hats``."""
        res = {}
        cs = np.concatenate(([0], np.cumsum(hats, dtype=np.int64)))
        for t in self.plan.teams:
            if t.g == 0 or t.n + t.g > len(hats):
                continue
            if teams is not None and t.k not in teams:
                continue
            want = 0 if self.team_mode(t) == WIN else 1
            res[t.k] = bool(np.all(self.team_parities(None, t, cs) == want))
        return res

    def params(self):
        return {"plan": self.plan.to_dict(), "mode": self.mode}


def nth_non_square(a: int) -> int:
    """Global number of the ``a``-th player that is not a perfect square."""
    return a + (1 + math.isqrt(4 * a)) // 2


def squares_upto(n: int) -> int:
    return math.isqrt(n)


@dataclass(frozen=True)
class PointLaw:
    """Finitely supported law on ``[0,1/2] x [1/2,1]``: ``(weight, (ell, u))``."""

    atoms: tuple[tuple[Fraction, tuple[Fraction, Fraction]], ...]
    cumulative: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((Fraction(w), (Fraction(l), Fraction(u))) for w, (l, u) in self.atoms)
        if not atoms:
            raise ValueError("empty law")
        total = sum(w for w, _ in atoms)
        if total != 1 or any(w <= 0 for w, _ in atoms):
            raise ValueError("weights must be positive and sum to 1")
        for _, (l, u) in atoms:
            if not (0 <= l <= HALF <= u <= 1):
                raise ValueError(f"support point ({l}, {u}) outside [0,1/2]x[1/2,1]")
        acc, cum = Fraction(0), []
        for w, _ in atoms:
            acc += w
            cum.append(acc)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "cumulative", tuple(cum))

    def inverse_cdf(self, v: Fraction) -> tuple[Fraction, Fraction]:
        """Atom whose cumulative interval ``[c_{j-1}, c_j)`` contains ``v``."""
        j = bisect.bisect_right(self.cumulative, v)
        return self.atoms[min(j, len(self.atoms) - 1)][1]

    def to_list(self):
        return [[str(w), [str(l), str(u)]] for w, (l, u) in self.atoms]


class MixedStrategy(GuessRule):
    """Square-numbered players are inactive noise sources (they guess 0).

    The hats of the first ``noise_bits`` inactive players are read as a dyadic
    number ``v`` in ``[0, 1)``; ``(L0, U0) = law.inverse_cdf(v)`` picks the
    target densities.  Active players renumber themselves 1, 2, 3, ... and play
    pairs when ``(L0, U0) = (1/2, 1/2)``, otherwise the team strategy for that
    target (alternating win/lose teams when both differ from 1/2).
    """

    kind = "mixed"

    def __init__(self, law: PointLaw, noise_bits: int = 53, num_teams: int = 12, eps_scale: int = 1):
        if noise_bits < 1:
            raise ValueError("need at least one noise bit")
        self.law, self.B, self.num_teams, self.eps_scale = law, noise_bits, num_teams, eps_scale
        self.noise_players = tuple(m * m for m in range(1, noise_bits + 1))

    def dispatch(self, noise) -> tuple[tuple[Fraction, Fraction], GuessRule]:
        target = self.law.inverse_cdf(dyadic_value(noise))
        return target, dispatched_rule(target, self.num_teams, self.eps_scale)

    def _candidates(self):
        return [dispatched_rule(t, self.num_teams, self.eps_scale) for _, t in self.law.atoms]

    @staticmethod
    def active_index(p: int) -> int:
        return p - squares_upto(p)

    def window(self, i):
        noise = frozenset(self.noise_players)
        if is_square(i):
            return frozenset()
        a = self.active_index(i)
        inner = frozenset().union(*(rule.window(a) for rule in self._candidates()))
        return (noise | frozenset(nth_non_square(x) for x in inner)) - {i}

    def guess(self, i, hats):
        if is_square(i):
            return 0
        _, rule = self.dispatch([hats[p - 1] for p in self.noise_players])
        a = self.active_index(i)
        need = rule.horizon(a)
        active = np.array([hats[nth_non_square(x) - 1] for x in range(1, need + 1)])
        return rule.guess(a, active)

    def horizon(self, N):
        a_n = self.active_index(N) if N > 1 else 1
        need = max(max(rule.horizon(max(a_n, 1)) for rule in self._candidates()), 1)
        return max(nth_non_square(need), self.noise_players[-1], N)

    def correct_bits(self, hats, N):
        H = self.horizon(N)
        h = np.asarray(hats[:H])
        idx = np.arange(1, H + 1)
        sq = np.isin(idx, np.arange(1, math.isqrt(H) + 1) ** 2)
        noise = h[np.array(self.noise_players) - 1]
        _, rule = self.dispatch(noise)
        active = h[~sq]
        n_active = int(np.count_nonzero(~sq[:N]))
        out = np.empty(H, dtype=bool)
        out[sq] = h[sq] == 0
        act = np.zeros(active.size, dtype=bool)
        if n_active:
            act[:n_active] = rule.correct_bits(active, n_active)
        out[~sq] = act
        return out[:N]

    def params(self):
        return {"law": self.law.to_list(), "noise_bits": self.B,
                "num_teams": self.num_teams, "eps_scale": self.eps_scale}


@lru_cache(maxsize=64)
def dispatched_rule(target, num_teams, eps_scale) -> GuessRule:
    ell, u = target
    if ell == HALF and u == HALF:
        return Pairs()
    if ell == HALF:
        return TeamStrategy(generate_plan(u, num_teams, eps_scale=eps_scale), WIN)
    if u == HALF:
        return TeamStrategy(generate_plan(1 - ell, num_teams, eps_scale=eps_scale), LOSE)
    return TeamStrategy(generate_plan(u, num_teams, ell=ell, eps_scale=eps_scale))


def countable_K(eps, i: int) -> int:
    """``K_i = ceil(2^(i+1)/eps)``, so ``sum 1/K_i <= eps/2``."""
    return math.ceil(Fraction(2 ** (i + 1)) / Fraction(eps))


class CountableColorGuess(GuessRule):
    """Player ``i`` guesses a fixed pseudo-random color in ``{0..K_i-1}``."""

    kind = "countable_color"

    def __init__(self, eps=Fraction(1, 10), seed: int = 0):
        self.eps = Fraction(eps)
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        self.seed = seed
        self.space = ColorSpace.countable(lambda i: countable_K(self.eps, i))

    def K(self, i: int) -> int:
        return countable_K(self.eps, i)

    def window(self, i):
        return frozenset()

    def guess(self, i, hats):
        k = self.K(i)
        x = splitmix64(_coin_key(self.seed, i))
        # fold extra 64-bit words in for K_i beyond 2^64
        words = 1
        while (1 << (64 * words)) < k * 2**16:
            x = (x << 64) | splitmix64(x & MASK64)
            words += 1
        return x % k

    def correct_bits(self, hats, N):
        return np.array([int(hats[i - 1]) == self.guess(i, hats) for i in range(1, N + 1)])

    def params(self):
        return {"eps": str(self.eps), "seed": self.seed}


class PositiveSupportGuess(GuessRule):
    """Each player draws a Poisson(``lam``) guess from a per-player stream."""

    kind = "positive_support"

    def __init__(self, lam: float = 1.0, seed: int = 0):
        if lam <= 0:
            raise ValueError("lam must be positive")
        self.lam, self.seed = lam, seed
        self.space = ColorSpace.countable(lambda i: 2**62)

    def window(self, i):
        return frozenset()

    def guess(self, i, hats):
        return int(np.random.default_rng([self.seed, i]).poisson(self.lam))

    def params(self):
        return {"lam": self.lam, "seed": self.seed}


class ContinuumGuess(GuessRule):
    """Real-valued hats.  ``rule="mean"`` guesses the mean of the first
    ``width`` other players' hats; ``rule="constant"`` always guesses ``value``."""

    kind = "continuum"

    def __init__(self, rule: str = "mean", width: int = 10, value: float = 0.5, hat_law: str = "uniform"):
        if hat_law != "uniform":
            raise ValueError(f"hat law {hat_law!r} is not atomless")
        if rule not in ("mean", "constant"):
            raise ValueError(f"unknown rule {rule!r}")
        self.rule, self.width, self.value, self.hat_law = rule, width, value, hat_law
        self.space = ColorSpace.continuum()

    def window(self, i):
        if self.rule == "constant":
            return frozenset()
        return frozenset(p for p in range(1, self.width + 2) if p != i)

    def _seen(self, i):
        return [p for p in range(1, self.width + 2) if p != i][: self.width]

    def guess(self, i, hats):
        if self.rule == "constant":
            return self.value
        return float(np.mean([hats[p - 1] for p in self._seen(i)]))

    def horizon(self, N):
        return N if self.rule == "constant" else max(N, self.width + 1)

    def correct_bits(self, hats, N):
        h = np.asarray(hats, dtype=float)
        if self.rule == "constant":
            return h[:N] == self.value
        W = self.width
        first = h[: W + 1]
        # players > W+1 all see players 1..W; player p <= W+1 skips itself
        g = np.full(N, np.mean(first[:W]))
        for p in range(1, min(N, W + 1) + 1):
            g[p - 1] = np.mean(np.delete(first, p - 1)[:W])
        return h[:N] == g

    def params(self):
        return {"rule": self.rule, "width": self.width, "value": self.value, "hat_law": self.hat_law}


class OracleCheat(GuessRule):
    """Invalid rule: player ``i`` reads its own hat.  Used only to show that
    the checks can fail."""

    kind = "oracle_cheat"
    valid = False

    def window(self, i):
        return frozenset({i})

    def guess(self, i, hats):
        return int(hats[i - 1])

    def correct_bits(self, hats, N):
        return np.ones(N, dtype=bool)


def _fr(x):
    return Fraction(str(x)) if not isinstance(x, Fraction) else x


def strategy_from_spec(spec: dict) -> GuessRule:
    kind = spec["kind"]
    p = dict(spec.get("params", {}))
    if kind == "constant":
        return Constant(**p)
    if kind == "independent_random":
        return IndependentRandom(**p)
    if kind == "even_odd":
        return EvenOdd(**p)
    if kind == "pairs":
        return Pairs()
    if kind == "mod_k_sum":
        return ModKSum(**p)
    if kind == "mod_k_groups":
        return ModKGroups(**p)
    if kind == "block_l0u1":
        if "schedule" in p:
            sched = p.pop("schedule")
            if sched == "geometric":
                return BlockL0U1(geometric_block_ends(**p))
            if sched == "factorial":
                return BlockL0U1(factorial_block_ends(**p))
            if sched == "ratio":
                return BlockL0U1(ratio_block_ends(p["num_blocks"], _fr(p["ratio"]), p.get("first", 2)))
            raise ValueError(f"unknown block schedule {sched!r}")
        return BlockL0U1(p.get("ends"))
    if kind == "team":
        mode = p.get("mode")
        if "plan" in p:
            plan = TeamPlan.from_dict(p["plan"])
        else:
            ell = p.get("ell")
            plan = generate_plan(_fr(p.get("u", "3/4")), int(p.get("teams", 12)),
                                 ell=None if ell is None else _fr(ell),
                                 eps_scale=int(p.get("eps_scale", 1)))
        return TeamStrategy(plan, mode)
    if kind == "mixed":
        law = PointLaw(tuple((_fr(w), (_fr(l), _fr(u))) for w, (l, u) in p["law"]))
        return MixedStrategy(law, int(p.get("noise_bits", 53)), int(p.get("num_teams", 12)),
                             int(p.get("eps_scale", 1)))
    if kind == "countable_color":
        return CountableColorGuess(_fr(p.get("eps", "1/10")), int(p.get("seed", 0)))
    if kind == "positive_support":
        return PositiveSupportGuess(**p)
    if kind == "continuum":
        return ContinuumGuess(**p)
    if kind == "oracle_cheat":
        return OracleCheat()
    raise ValueError(f"unknown strategy kind {kind!r}")


TWO_POINT_LAW = [["1/2", ["0", "1"]], ["1/2", ["1/2", "1/2"]]]

PRESETS: dict[str, dict] = {
    "constant": {"kind": "constant", "params": {"c": 0}},
    "random": {"kind": "independent_random", "params": {"seed": 0}},
    "even-odd": {"kind": "even_odd", "params": {"group": 4}},
    "pairs": {"kind": "pairs", "params": {}},
    "mod-k-sum": {"kind": "mod_k_sum", "params": {"K": 3, "c": 0, "group": 3}},
    "mod-k-groups": {"kind": "mod_k_groups", "params": {"K": 3}},
    "block": {"kind": "block_l0u1", "params": {"schedule": "geometric"}},
    "block-factorial": {"kind": "block_l0u1", "params": {"schedule": "factorial"}},
    "block-dense": {"kind": "block_l0u1", "params": {"schedule": "ratio", "num_blocks": 60,
                                                    "ratio": "5/4", "first": 2}},
    "team-win": {"kind": "team", "params": {"u": "3/4", "teams": 12, "mode": "win"}},
    "team-lose": {"kind": "team", "params": {"u": "3/4", "teams": 12, "mode": "lose"}},
    "team-alt": {"kind": "team", "params": {"u": "1", "ell": "0", "teams": 12}},
    "mixed": {"kind": "mixed", "params": {"law": TWO_POINT_LAW}},
    "countable": {"kind": "countable_color", "params": {"eps": "1/10"}},
    "poisson": {"kind": "positive_support", "params": {"lam": 1.0}},
    "continuum": {"kind": "continuum", "params": {"rule": "mean", "width": 10}},
}


def preset(name: str, n: int | None = None) -> GuessRule:
    """Named preset.  For the finite-game presets ``even-odd`` and
    ``mod-k-sum``, ``n`` sets the group to the whole ``n``-player game."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    spec = {"kind": PRESETS[name]["kind"], "params": dict(PRESETS[name]["params"])}
    if n is not None and name in ("even-odd", "mod-k-sum"):
        spec["params"]["group"] = n
    return strategy_from_spec(spec)
