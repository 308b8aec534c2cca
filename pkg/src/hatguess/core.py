"""Domain types shared by every other module: color spaces, hat assignments,
outcome trajectories, density estimates and the seeded randomness contract.

Players are numbered from 1. Hat arrays are 0-based numpy arrays, so the hat of
player ``p`` lives at ``hats[p - 1]``.

Randomness: every run draws from numpy's ``PCG64`` bit generator. Independent
runs derive their streams with ``numpy.random.SeedSequence(seed,
spawn_key=(run_index,))``, which is the documented seed-splitting rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

Rational = Fraction


class ColorKind(str, Enum):
    BINARY = "binary"
    FINITE = "finite"
    COUNTABLE = "countable"
    CONTINUUM = "continuum"


@dataclass(frozen=True)
class ColorSpace:
    """Set of hat colors.  ``Binary`` is exactly ``FiniteK(2)``."""

    kind: ColorKind
    K: int | None = None
    K_of: Callable[[int], int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind is ColorKind.BINARY and self.K not in (None, 2):
            raise ValueError("binary space has exactly 2 colors")
        if self.kind is ColorKind.BINARY:
            object.__setattr__(self, "K", 2)
        if self.kind is ColorKind.FINITE and (self.K is None or self.K < 2):
            raise ValueError("finite color space needs K >= 2")
        if self.kind is ColorKind.FINITE and self.K == 2:
            object.__setattr__(self, "kind", ColorKind.BINARY)
        if self.kind is ColorKind.COUNTABLE and self.K_of is None:
            raise ValueError("countable space needs a K_i generator")

    @classmethod
    def binary(cls) -> ColorSpace:
        return cls(ColorKind.BINARY)

    @classmethod
    def finite(cls, K: int) -> ColorSpace:
        return cls(ColorKind.FINITE, K)

    @classmethod
    def countable(cls, K_of: Callable[[int], int]) -> ColorSpace:
        return cls(ColorKind.COUNTABLE, None, K_of)

    @classmethod
    def continuum(cls) -> ColorSpace:
        return cls(ColorKind.CONTINUUM)

    @property
    def is_finite(self) -> bool:
        return self.kind in (ColorKind.BINARY, ColorKind.FINITE)

    def colors_for(self, player: int) -> int:
        """Number of colors available to ``player`` (finite or countable spaces)."""
        if self.is_finite:
            return self.K
        if self.kind is ColorKind.COUNTABLE:
            k = int(self.K_of(player))
            if k < 2:
                raise ValueError(f"K_{player} = {k} < 2")
            return k
        raise ValueError("continuum space has no finite color count")

    def is_valid(self, player: int, color) -> bool:
        if self.kind is ColorKind.CONTINUUM:
            return 0.0 <= float(color) <= 1.0
        return float(color).is_integer() and 0 <= int(color) < self.colors_for(player)


class Tail(str, Enum):
    UNSAMPLED = "unsampled"
    CONSTANT_BLACK = "constant_black"


@dataclass(frozen=True)
class HatAssignment:
    """Hats of players ``1..N`` plus an explicit convention for the rest."""

    space: ColorSpace
    prefix: np.ndarray
    tail: Tail = Tail.UNSAMPLED

    def __post_init__(self):
        prefix = np.asarray(self.prefix)
        if prefix.ndim != 1 or prefix.size < 1:
            raise ValueError("prefix must be a non-empty vector")
        if self.tail is Tail.CONSTANT_BLACK and not self.space.is_finite:
            raise ValueError("constant-black tail requires a finite color space")
        prefix = prefix.copy()
        prefix.setflags(write=False)
        object.__setattr__(self, "prefix", prefix)

    @property
    def N(self) -> int:
        return int(self.prefix.size)

    def hat(self, player: int):
        if player < 1:
            raise IndexError("players are numbered from 1")
        if player <= self.N:
            return self.prefix[player - 1]
        if self.tail is Tail.CONSTANT_BLACK:
            return self.prefix.dtype.type(0)
        raise IndexError(f"player {player} is in the unsampled tail")

    def extended(self, length: int) -> np.ndarray:
        """Hats of players ``1..length``; needs a constant-black tail past ``N``."""
        if length <= self.N:
            return np.asarray(self.prefix[:length])
        if self.tail is not Tail.CONSTANT_BLACK:
            raise IndexError("cannot extend an unsampled tail")
        out = np.zeros(length, dtype=self.prefix.dtype)
        out[: self.N] = self.prefix
        return out


@dataclass
class RandomSource:
    """Seeded PCG64 stream.  Single owner per run."""

    seed: int
    run_index: int | None = None
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.run_index is None:
            ss = np.random.SeedSequence(self.seed)
        else:
            ss = np.random.SeedSequence(self.seed, spawn_key=(self.run_index,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def child(self, run_index: int) -> RandomSource:
        """Independent stream for run ``run_index`` (same for every caller)."""
        return RandomSource(self.seed, run_index)

    def bits(self, n: int) -> np.ndarray:
        """``n`` fair coin flips as a uint8 array of 0/1."""
        raw = np.frombuffer(self.generator.bytes((n + 7) // 8), dtype=np.uint8)
        return np.unpackbits(raw, count=n)


def sample_assignment(space: ColorSpace, N: int, rng: RandomSource) -> HatAssignment:
    """Draw hats for players ``1..N`` independently and uniformly."""
    if N < 1:
        raise ValueError("N must be >= 1")
    gen = rng.generator
    if space.kind is ColorKind.BINARY:
        prefix = rng.bits(N)
    elif space.kind is ColorKind.FINITE:
        prefix = gen.integers(0, space.K, size=N, dtype=np.int64)
    elif space.kind is ColorKind.COUNTABLE:
        highs = np.array([space.colors_for(i) for i in range(1, N + 1)], dtype=object)
        if max(highs) < 2**63:
            prefix = gen.integers(0, highs.astype(np.int64), dtype=np.int64)
        else:
            prefix = np.array([int(gen.integers(0, h)) if h < 2**63 else _big_uniform(gen, h)
                               for h in highs], dtype=object)
    else:
        prefix = gen.random(N)
    return HatAssignment(space, prefix)


def _big_uniform(gen: np.random.Generator, high: int) -> int:
    # rejection sampling on whole 64-bit words
    nbits = high.bit_length()
    while True:
        words = gen.integers(0, 2**63, size=(nbits + 62) // 63, dtype=np.int64)
        x = 0
        for w in words:
            x = (x << 63) | int(w)
        x >>= 63 * len(words) - nbits
        if x < high:
            return x


@dataclass(frozen=True)
class OutcomeTrajectory:
    """Correctness bits ``Z_1..Z_N`` of one run."""

    correct: np.ndarray
    checkpoints: tuple[int, ...] = ()

    def __post_init__(self):
        bits = np.asarray(self.correct, dtype=bool).copy()
        bits.setflags(write=False)
        object.__setattr__(self, "correct", bits)
        bad = [k for k in self.checkpoints if not 1 <= k <= bits.size]
        if bad:
            raise ValueError(f"checkpoints out of range: {bad[:5]}")

    @property
    def N(self) -> int:
        return int(self.correct.size)

    def count(self, k: int) -> int:
        return int(np.count_nonzero(self.correct[:k]))

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.correct, dtype=np.int64)

    def checkpoint_means(self) -> list[tuple[int, Fraction]]:
        cum = self.cumulative()
        return [(k, Fraction(int(cum[k - 1]), k)) for k in self.checkpoints]


def prefix_mean(traj: OutcomeTrajectory, k: int) -> Fraction:
    """Exact fraction of players ``1..k`` who guessed correctly."""
    if not 1 <= k <= traj.N:
        raise ValueError(f"k={k} outside 1..{traj.N}")
    return Fraction(traj.count(k), k)


@dataclass(frozen=True)
class DensityEstimate:
    lower: Fraction
    upper: Fraction
    window: tuple[int, int]

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError("need 0 <= lower <= upper <= 1")


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def is_square(n: int) -> bool:
    r = math.isqrt(n)
    return r * r == n


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def dyadic_value(bits: Sequence[int]) -> Fraction:
    """The dyadic rational ``0.b1 b2 b3 ...`` in binary."""
    v = 0
    for b in bits:
        v = 2 * v + int(b)
    return Fraction(v, 2 ** len(bits))
