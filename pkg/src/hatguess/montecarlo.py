"""Simulation of the infinite game truncated to players ``1..N``.

Hats are sampled for players ``1..horizon(N)``, which is exactly what the
first ``N`` guesses depend on, so a truncated run is an exact sample of the
infinite game's first ``N`` outcomes.

Statistical checks use normal-approximation intervals at 99% confidence
(``z = 2.5758``).  Per-run "sure" inequalities are checked exactly with
integer arithmetic.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import DensityEstimate, OutcomeTrajectory, RandomSource, sample_assignment
from .plan import HALF, WIN, TeamPlan
from .strategies import BlockL0U1, GuessRule, TeamStrategy

HORIZON_GUARD = 5 * 10**7
Z99 = 2.5758293035489
DEFAULT_K_MIN = 100


class HorizonError(ValueError):
    pass


def sample_hats(rule: GuessRule, N: int, rng: RandomSource) -> np.ndarray:
    H = rule.horizon(N)
    if H > HORIZON_GUARD:
        raise HorizonError(f"horizon {H} exceeds guard {HORIZON_GUARD}")
    return np.asarray(sample_assignment(rule.space, H, rng).prefix)


def default_checkpoints(rule: GuessRule, N: int) -> tuple[int, ...]:
    """Team and block boundaries up to ``N`` plus a geometric grid."""
    pts = {N}
    k = 1
    while k < N:
        pts.add(k)
        k = max(k + 1, int(k * 1.25))
    if isinstance(rule, TeamStrategy):
        for t in rule.plan.teams:
            pts.update(x for x in (t.n, t.n + t.g, t.end) if 1 <= x <= N)
    if isinstance(rule, BlockL0U1):
        pts.update(e for e in rule.ends if e <= N)
    return tuple(sorted(pts))


def simulate_run(rule: GuessRule, N: int, rng: RandomSource, checkpoints: Iterable[int] | None = None,
                 return_hats: bool = False):
    """One run: sample hats, evaluate players ``1..N``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    hats = sample_hats(rule, N, rng)
    bits = rule.correct_bits(hats, N)
    cps = tuple(checkpoints) if checkpoints is not None else default_checkpoints(rule, N)
    traj = OutcomeTrajectory(bits, cps)
    return (traj, hats) if return_hats else traj


def density_estimate(traj: OutcomeTrajectory, k_min: int = DEFAULT_K_MIN, even_only: bool = False) -> DensityEstimate:
    """Min and max of ``Zbar_k`` for ``k_min <= k <= N`` (optionally even ``k``)."""
    if not 1 <= k_min < traj.N:
        raise ValueError(f"k_min={k_min} must be in [1, N={traj.N})")
    cum = traj.cumulative()
    ks = np.arange(k_min, traj.N + 1)
    if even_only:
        ks = ks[ks % 2 == 0]
    vals = cum[ks - 1] / ks
    # distinct fractions with denominators <= N differ by far more than float
    # resolution, so the float arg-extremes are the exact ones
    lo, hi = int(ks[np.argmin(vals)]), int(ks[np.argmax(vals)])
    return DensityEstimate(Fraction(int(cum[lo - 1]), lo), Fraction(int(cum[hi - 1]), hi), (k_min, traj.N))


def run_seed(seed: int, run: int) -> RandomSource:
    return RandomSource(seed, run)


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    runs: int = 0
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    failed: int = 0

    def fail(self, detail):
        self.passed = False
        self.failed += 1
        if len(self.failures) < 20:
            self.failures.append(detail)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "runs": self.runs, "failed": self.failed,
                "failures": self.failures, "stats": self.stats}


def verify_theorem_main(rule: GuessRule, N: int = 10**5, runs: int = 100, tol: float = 0.02,
                        seed: int = 0, k_min: int = DEFAULT_K_MIN, name: str | None = None) -> CheckReport:
    """Every run must have ``min Zbar <= 1/2 + tol`` and ``max Zbar >= 1/2 - tol``
    over the window ``k_min..N``."""
    rep = CheckReport(name or f"theorem-main[{rule.kind}]")
    tol = Fraction(tol).limit_denominator(10**6)
    lows, highs = [], []
    for run in range(runs):
        traj = simulate_run(rule, N, run_seed(seed, run), checkpoints=())
        est = density_estimate(traj, k_min)
        lows.append(est.lower)
        highs.append(est.upper)
        rep.runs += 1
        if not (est.lower <= HALF + tol and est.upper >= HALF - tol):
            rep.fail({"run": run, "lower": str(est.lower), "upper": str(est.upper)})
    rep.stats = {"max_lower": float(max(lows)), "min_upper": float(min(highs)),
                 "mean_lower": float(np.mean([float(x) for x in lows])),
                 "mean_upper": float(np.mean([float(x) for x in highs]))}
    return rep


def random_block_parities(rng: RandomSource, lengths, runs: int, chunk_bytes: int = 1 << 26) -> np.ndarray:
    """Parities of white-hat counts of independent blocks of fair hats.

    Returns a ``(runs, len(lengths))`` uint8 array.  Each block's hats are
    drawn as packed random bytes; the parity of a block is the parity of the
    XOR of its bytes, with the unused bits of the last byte masked off.
    """
    out = np.empty((runs, len(lengths)), dtype=np.uint8)
    popparity = np.array([bin(x).count("1") & 1 for x in range(256)], dtype=np.uint8)
    gen = rng.generator
    for j, L in enumerate(lengths):
        L = int(L)
        if L == 0:
            out[:, j] = 0
            continue
        nb = (L + 7) // 8
        mask = np.uint8((0xFF << (8 * nb - L)) & 0xFF)
        per = max(1, chunk_bytes // nb)
        for r0 in range(0, runs, per):
            r1 = min(runs, r0 + per)
            raw = np.frombuffer(gen.bytes((r1 - r0) * nb), dtype=np.uint8).reshape(r1 - r0, nb).copy()
            raw[:, -1] &= mask
            out[r0:r1, j] = popparity[np.bitwise_xor.reduce(raw, axis=1)]
    return out


@dataclass
class FrequencyEstimate:
    label: str
    hits: int
    runs: int
    expected: float | None = None

    @property
    def p(self) -> float:
        return self.hits / self.runs

    @property
    def half_width(self) -> float:
        """99% normal-approximation half width."""
        p = self.p
        return Z99 * math.sqrt(max(p * (1 - p), 1e-12) / self.runs)

    def to_dict(self):
        return {"label": self.label, "p": self.p, "ci99": [self.p - self.half_width, self.p + self.half_width],
                "runs": self.runs, "expected": self.expected}


def event_matrix(rule: GuessRule, runs: int, rng: RandomSource, max_players: int = 3 * 10**6):
    """Sampled indicators of the strategy's all-correct events.

    Block strategy: ``A_j`` for each block ending at or before ``max_players``.
    Team strategy: ``A_k`` for each team with gamblers whose gambler squad ends
    at or before ``max_players``.  Only the hats that define the events are
    drawn, block by block.
    """
    if isinstance(rule, BlockL0U1):
        ends = [e for e in rule.ends if e <= max_players]
        lengths = np.diff([0] + ends)
        par = random_block_parities(rng, lengths, runs)
        labels = [f"A_{j + 1}" for j in range(len(ends))]
        return labels, par == 0, [0.5] * len(ends)
    if isinstance(rule, TeamStrategy):
        teams = [t for t in rule.plan.teams if t.g > 0 and t.n + t.g <= max_players]
        cols, labels, expect = [], [], []
        for t in teams:
            par = random_block_parities(rng, [t.s] * t.b, runs)
            want = 0 if rule.team_mode(t) == WIN else 1
            cols.append(np.all(par == want, axis=1))
            labels.append(f"A_{t.k}")
            expect.append(2.0 ** -t.b)
        return labels, np.stack(cols, axis=1), expect
    raise TypeError(f"{rule.kind} has no all-correct events")


def event_frequency(rule: GuessRule, runs: int = 10**4, seed: int = 0, max_players: int = 3 * 10**6):
    labels, mat, expect = event_matrix(rule, runs, RandomSource(seed, 10**6), max_players)
    freqs = [FrequencyEstimate(lab, int(mat[:, j].sum()), runs, expect[j]) for j, lab in enumerate(labels)]
    return freqs, mat


def pairwise_correlations(mat: np.ndarray) -> dict[tuple[int, int], float]:
    m = mat.astype(float)
    out = {}
    for a in range(m.shape[1]):
        for b in range(a + 1, m.shape[1]):
            sa, sb = m[:, a].std(), m[:, b].std()
            if sa == 0 or sb == 0:
                continue
            out[(a, b)] = float(np.mean((m[:, a] - m[:, a].mean()) * (m[:, b] - m[:, b].mean())) / (sa * sb))
    return out


def _fits_int64(bound: Fraction, n: int) -> bool:
    return max(abs(bound.numerator), bound.denominator) * (n + 1) < 2**62


def all_le(cum: np.ndarray, ks: np.ndarray, bound: Fraction, strict: bool = False) -> tuple[bool, int | None]:
    """Exact check ``cum[k-1]/k <= bound`` (or ``<``) for all ``k`` in ``ks``.
    Returns ``(ok, first_offending_k)``."""
    if ks.size == 0:
        return True, None
    if _fits_int64(bound, int(ks.max())):
        lhs = cum[ks - 1] * bound.denominator
        rhs = ks * bound.numerator
        bad = lhs >= rhs if strict else lhs > rhs
        if bad.any():
            return False, int(ks[np.argmax(bad)])
        return True, None
    for k in ks.tolist():
        v = Fraction(int(cum[k - 1]), k)
        if (v >= bound) if strict else (v > bound):
            return False, k
    return True, None


def all_ge(cum: np.ndarray, ks: np.ndarray, bound: Fraction, strict: bool = False) -> tuple[bool, int | None]:
    """Exact check ``cum[k-1]/k >= bound`` (or ``>``)."""
    if ks.size == 0:
        return True, None
    if _fits_int64(bound, int(ks.max())):
        lhs = cum[ks - 1] * bound.denominator
        rhs = ks * bound.numerator
        bad = lhs <= rhs if strict else lhs < rhs
        if bad.any():
            return False, int(ks[np.argmax(bad)])
        return True, None
    for k in ks.tolist():
        v = Fraction(int(cum[k - 1]), k)
        if (v <= bound) if strict else (v < bound):
            return False, k
    return True, None


def team_sure_checks(rule: TeamStrategy, cum: np.ndarray, events: dict[int, bool]) -> list[tuple[str, int, int | None]]:
    """Exact per-run inequalities of the team construction; returns violations
    as ``(check, team, k)``.

    * ``1/2 - eps_k < Zbar_{n_k} < 1/2 + eps_k`` for ``k >= 1``;
    * win teams, even ``i`` in the team:
      ``Zbar_i <= u_k + eps_k/(1 + alpha_k)`` and ``Zbar_i >= 1/2 - eps_k - s_k/n_k``;
    * win teams on ``A_k``: ``Zbar_{n_k + g_k} >= u_k - eps_k/(1 + alpha_k)``.

    Lose teams get the mirror images (``Zbar -> 1 - Zbar``).
    """
    N = cum.size
    bad = []
    for t in rule.plan.teams:
        if t.k == 0 or t.n > N:
            continue
        nk = np.array([t.n])
        lo, hi = HALF - t.eps, HALF + t.eps
        if not (all_ge(cum, nk, lo, True)[0] and all_le(cum, nk, hi, True)[0]):
            bad.append(("nk-bound", t.k, t.n))
        last = min(t.end, N)
        ks = np.arange(t.n + (t.n % 2), last + 1, 2)
        top = t.u_k + t.eps / (1 + t.alpha)
        floor_ = HALF - t.eps - Fraction(t.s, t.n)
        on_a = t.u_k - t.eps / (1 + t.alpha)
        win = rule.team_mode(t) == WIN
        if win:
            ok_top, k_top = all_le(cum, ks, top)
            ok_bot, k_bot = all_ge(cum, ks, floor_, False)
        else:
            ok_top, k_top = all_ge(cum, ks, 1 - top, False)
            ok_bot, k_bot = all_le(cum, ks, 1 - floor_)
        if not ok_top:
            bad.append(("gambler-upper", t.k, k_top))
        if not ok_bot:
            bad.append(("gambler-lower", t.k, k_bot))
        if events.get(t.k) and t.g > 0 and t.n + t.g <= N:
            kk = np.array([t.n + t.g])
            ok = all_ge(cum, kk, on_a, False)[0] if win else all_le(cum, kk, 1 - on_a)[0]
            if not ok:
                bad.append(("A_k-bound", t.k, t.n + t.g))
    return bad


def block_sure_checks(rule: BlockL0U1, cum: np.ndarray, events: np.ndarray) -> list[tuple[str, int, int]]:
    """On ``A_j``: ``Zbar_{n_j} >= 1 - n_{j-1}/n_j``; off it: ``<= n_{j-1}/n_j``."""
    bad = []
    for j, hit in enumerate(events):
        e, s = rule.ends[j], rule.starts[j]
        if e > cum.size:
            break
        k = np.array([e])
        if hit and not all_ge(cum, k, 1 - Fraction(s, e), False)[0]:
            bad.append(("block-win-bound", j + 1, e))
        if not hit and not all_le(cum, k, Fraction(s, e))[0]:
            bad.append(("block-lose-bound", j + 1, e))
    return bad


def run_report(rule: GuessRule, traj: OutcomeTrajectory, hats: np.ndarray, run: int, k_min: int = DEFAULT_K_MIN) -> dict:
    """Per-run JSON-ready report including every exact sure-check."""
    cum = traj.cumulative()
    rep = {"run": run, "N": traj.N, "zbar_N": str(Fraction(int(cum[-1]), traj.N))}
    if traj.N > k_min:
        est = density_estimate(traj, k_min)
        rep["lower"], rep["upper"] = str(est.lower), str(est.upper)
    violations = []
    if isinstance(rule, TeamStrategy):
        ev = rule.events(hats)
        rep["events"] = {str(k): v for k, v in ev.items()}
        violations = team_sure_checks(rule, cum, ev)
    elif isinstance(rule, BlockL0U1):
        nb = sum(1 for e in rule.ends if e <= traj.N)
        ev = rule.events(hats, nb) if nb else np.array([], dtype=bool)
        rep["events"] = {str(j + 1): bool(v) for j, v in enumerate(ev)}
        violations = block_sure_checks(rule, cum, ev)
    elif rule.kind == "pairs":
        ks = np.arange(2, traj.N + 1, 2)
        if not (all_le(cum, ks, HALF)[0] and all_ge(cum, ks, HALF, False)[0]):
            violations.append(("pairs-half", 0, None))
    elif rule.kind == "mod_k_groups":
        ks = np.arange(rule.K, traj.N + 1, rule.K)
        if not np.all(cum[ks - 1] == ks // rule.K):
            violations.append(("one-per-group", 0, None))
    rep["violations"] = [list(v) for v in violations]
    rep["ok"] = not violations
    return rep


def checkpoints_csv(traj: OutcomeTrajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "numerator", "denominator"])
    for k, v in traj.checkpoint_means():
        w.writerow([k, v.numerator, v.denominator])
    return buf.getvalue()


def jsonl(reports: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in reports)


def verify_density_targets(rule: TeamStrategy, N: int, runs: int = 200, seed: int = 0,
                           name: str | None = None) -> CheckReport:
    """Exact team inequalities on every run, plus the spread of
    ``Zbar_{n_k + g_k}`` on the runs where ``A_k`` happened."""
    if not isinstance(rule, TeamStrategy):
        raise TypeError("density targets apply to team strategies")
    from .plan import validate_plan

    rep = CheckReport(name or "density-targets")
    plan_rep = validate_plan(rule.plan)
    if not plan_rep.passed:
        rep.fail({"plan": plan_rep.to_dict()})
        return rep
    peaks: dict[int, list[float]] = {}
    for run in range(runs):
        traj, hats = simulate_run(rule, N, run_seed(seed, run), checkpoints=(), return_hats=True)
        cum = traj.cumulative()
        ev = rule.events(hats)
        rep.runs += 1
        for v in team_sure_checks(rule, cum, ev):
            rep.fail({"run": run, "check": v[0], "team": v[1], "k": v[2]})
        for t in rule.plan.teams:
            if ev.get(t.k) and t.n + t.g <= N:
                z = float(cum[t.n + t.g - 1]) / (t.n + t.g)
                # lose teams are tracked through 1 - Zbar
                peaks.setdefault(t.k, []).append(z if rule.team_mode(t) == WIN else 1 - z)
    covered = [t.k for t in rule.plan.teams if t.end <= N]
    rep.stats = {"teams_covered": len(covered), "N": N,
                 "peak_on_A": {str(k): {"mode": rule.team_mode(rule.plan.teams[k]),
                                        "u_k": float(rule.plan.teams[k].u_k), "worst": min(v), "count": len(v)}
                               for k, v in sorted(peaks.items())}}
    return rep


def plan_sim_horizon(plan: TeamPlan, cap: int = 2 * 10**6) -> int:
    """Largest team end within ``cap`` (at least the first team with gamblers)."""
    ends = [t.end for t in plan.teams if t.end <= cap]
    return max(ends) if ends else plan.teams[0].end
