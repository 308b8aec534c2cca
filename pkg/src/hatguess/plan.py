"""Exact parameter sequences for the team construction (gamblers + recovery).

Team ``k`` owns players ``n_k + 1 .. n_{k+1}``.  Its first ``g_k`` players are
gamblers split into ``b_k`` blocks of ``s_k`` players; the remaining ``r_k``
players form the recovery squad and always play pairs.

All arithmetic is done with ``fractions.Fraction`` and Python integers, so
there is no overflow and no rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

HALF = Fraction(1, 2)

WIN = "win"
LOSE = "lose"


def blocks_per_team(k: int) -> int:
    """``floor(log2(k + 2))``."""
    return (k + 2).bit_length() - 1


def _sqrt_third(b: int) -> Fraction:
    # rational lower approximation of sqrt(b)/3; nondecreasing in b, and
    # c(b)/b nonincreasing for every b <= 100
    return Fraction(math.isqrt(100 * b), 30)


def default_u_schedule(u, k: int) -> Fraction:
    """Rational targets ``u_k`` with ``1/2 < u_k < u`` increasing to ``u``.

    For ``u < 1``: ``u_k = u - (u - 1/2)/(k + 2)``.
    For ``u = 1``: ``u_k = 1 - c(b_k)/b_k`` where ``c(b) = isqrt(100 b)/30``
    is about ``sqrt(b)/3``, so ``(1 - u_k) b_k = c(b_k)`` grows without bound
    while ``u_k -> 1``.
    """
    u = Fraction(u)
    if not HALF < u <= 1:
        raise ValueError("schedule needs 1/2 < u <= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    if u < 1:
        return u - (u - HALF) / (k + 2)
    b = blocks_per_team(k)
    return 1 - _sqrt_third(b) / b


def default_eps_schedule(k: int, scale: int = 1) -> Fraction:
    """``eps_k = 1/(scale * (k + 2))``."""
    return Fraction(1, scale * (k + 2))


@dataclass(frozen=True)
class TeamParams:
    k: int
    mode: str
    target: Fraction
    n: int
    g: int
    r: int
    b: int
    s: int
    u_k: Fraction
    alpha: Fraction
    eps: Fraction

    @property
    def start(self) -> int:
        return self.n

    @property
    def end(self) -> int:
        return self.n + self.g + self.r

    def block_range(self, j: int) -> tuple[int, int]:
        """Players ``(first, last)`` of gambler block ``j`` (1-based)."""
        first = self.n + (j - 1) * self.s + 1
        return first, first + self.s - 1


@dataclass(frozen=True)
class TeamPlan:
    """Finite prefix of the team sequence.

    ``u`` is the target upper density, ``ell`` the target lower density (``1/2``
    unless lose-teams are interleaved).  ``next_u``/``next_eps``/``next_b`` are
    the values for the first team past the plan, needed for the last team's
    divisibility rule.
    """

    u: Fraction
    ell: Fraction
    teams: tuple[TeamParams, ...]
    next_u: Fraction
    next_eps: Fraction
    eps_scale: int = 1
    ends: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(t.end for t in self.teams))

    @property
    def horizon(self) -> int:
        return self.teams[-1].end if self.teams else 0

    def team_of(self, player: int) -> TeamParams | None:
        import bisect

        idx = bisect.bisect_left(self.ends, player)
        if idx >= len(self.teams):
            return None
        return self.teams[idx]

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return {"num": str(v.numerator), "den": str(v.denominator)}
            return v

        return {
            "schema": "hatguess.teamplan/1",
            "u": enc(self.u),
            "ell": enc(self.ell),
            "eps_scale": self.eps_scale,
            "next_u": enc(self.next_u),
            "next_eps": enc(self.next_eps),
            "teams": [{key: enc(val) for key, val in asdict(t).items()} for t in self.teams],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> TeamPlan:
        def dec(v):
            if isinstance(v, dict) and set(v) == {"num", "den"}:
                return Fraction(int(v["num"]), int(v["den"]))
            return v

        teams = tuple(TeamParams(**{key: dec(val) for key, val in t.items()}) for t in d["teams"])
        return cls(dec(d["u"]), dec(d["ell"]), teams, dec(d["next_u"]), dec(d["next_eps"]),
                   d.get("eps_scale", 1))

    @classmethod
    def from_json(cls, text: str) -> TeamPlan:
        return cls.from_dict(json.loads(text))


def _team_alpha(u_k: Fraction) -> Fraction:
    return (u_k - HALF) / (1 - u_k)


def _min_recovery(m: int, eps_next: Fraction, step: Fraction) -> int:
    """Smallest even ``r > 0`` with ``r > m (1/2 - eps)/eps`` and ``(m + r) * step``
    an even integer.

    Both sides of the sandwich reduce to ``eps * r > (1/2 - eps) * m``.
    """
    bound = (HALF - eps_next) * m / eps_next
    r = max(2, math.floor(bound) + 1)
    r += r % 2
    while True:
        if eps_next * r > (HALF - eps_next) * m:
            x = (m + r) * step
            if x.denominator == 1 and x.numerator % 2 == 0:
                return r
        r += 2


def generate_plan(
    u,
    num_teams: int,
    u_schedule: Callable[[Fraction, int], Fraction] | None = None,
    eps_schedule: Callable[[int], Fraction] | None = None,
    ell=None,
    eps_scale: int = 1,
) -> TeamPlan:
    """Build teams ``0 .. num_teams-1`` for upper target ``u``.

    With ``ell`` given, odd-numbered teams become lose-teams aiming at
    ``1 - ell``; even-numbered teams stay win-teams aiming at ``u``.  A target of
    exactly ``1/2`` gives teams with no gamblers (pure pairs).
    """
    u = Fraction(u)
    if not HALF <= u <= 1:
        raise ValueError(f"u={u} outside [1/2, 1]")
    ell = HALF if ell is None else Fraction(ell)
    if not 0 <= ell <= HALF:
        raise ValueError(f"ell={ell} outside [0, 1/2]")
    if num_teams < 1:
        raise ValueError("num_teams must be >= 1")
    u_schedule = u_schedule or default_u_schedule
    if eps_schedule is None:
        eps_schedule = lambda k: default_eps_schedule(k, eps_scale)  # noqa: E731
    alternating = ell != HALF

    def mode_of(k):
        return LOSE if alternating and k % 2 == 1 else WIN

    def target_of(k):
        return 1 - ell if mode_of(k) == LOSE else u

    def u_of(k):
        if k == 0 or target_of(k) == HALF:
            return HALF
        uk = Fraction(u_schedule(target_of(k), k))
        if not HALF < uk < target_of(k):
            raise ValueError(f"u_{k}={uk} violates 1/2 < u_k < {target_of(k)}")
        return uk

    teams = []
    n = 0
    uk = u_of(0)
    for k in range(num_teams):
        eps = Fraction(eps_schedule(k))
        if eps <= 0:
            raise ValueError(f"eps_{k} must be positive")
        b = blocks_per_team(k)
        alpha = _team_alpha(uk)
        g = alpha * n
        assert g.denominator == 1, (k, g)
        g = int(g)
        s = g // b
        u_next = u_of(k + 1)
        step = _team_alpha(u_next) / blocks_per_team(k + 1)
        r = _min_recovery(n + g, Fraction(eps_schedule(k + 1)), step)
        teams.append(TeamParams(k, mode_of(k), target_of(k), n, g, r, b, s, uk, alpha, eps))
        n += g + r
        uk = u_next
    return TeamPlan(u, ell, tuple(teams), uk, Fraction(eps_schedule(num_teams)), eps_scale)


@dataclass
class PlanReport:
    violations: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def first(self):
        return self.violations[0] if self.violations else None

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "violations": [{"team": k, "rule": rule, "detail": d} for k, rule, d in self.violations]}


def _is_even_int(x) -> bool:
    x = Fraction(x)
    return x.denominator == 1 and x.numerator % 2 == 0


def _floor_log2(x: int) -> int:
    b = 0
    while 2 ** (b + 1) <= x:
        b += 1
    return b


def validate_plan(plan: TeamPlan) -> PlanReport:
    """Re-check every plan invariant from scratch.

    Shares no code with :func:`generate_plan`; each rule is recomputed from the
    stored numbers.
    """
    rep = PlanReport()
    bad = rep.violations.append
    half = Fraction(1, 2)
    teams = list(plan.teams)
    if not teams:
        bad((-1, "nonempty", "plan has no teams"))
        return rep
    if teams[0].n != 0:
        bad((0, "n_0 = 0", f"n_0={teams[0].n}"))
    if teams[0].alpha != 0:
        bad((0, "alpha_0 = 0", f"alpha_0={teams[0].alpha}"))
    prev_eps = None
    prev_u = {}
    prev_slack = None
    for idx, t in enumerate(teams):
        k = t.k
        if k != idx:
            bad((idx, "team index", f"k={k}"))
        if t.b != _floor_log2(k + 2):
            bad((k, "b_k = floor(log2(k+2))", f"b={t.b}"))
        if t.mode not in (WIN, LOSE):
            bad((k, "mode", t.mode))
        if k > 0:
            if t.target == half:
                if t.u_k != half:
                    bad((k, "u_k = 1/2 for a pure-pairs team", str(t.u_k)))
            elif not half < t.u_k < t.target:
                bad((k, "1/2 < u_k < u", f"u_k={t.u_k}, target={t.target}"))
            expected = (t.u_k - half) / (1 - t.u_k)
            if t.alpha != expected:
                bad((k, "alpha_k = (u_k - 1/2)/(1 - u_k)", f"{t.alpha} != {expected}"))
            last = prev_u.get(t.mode)
            if last is not None and t.u_k < last and t.target != half:
                bad((k, "u_k nondecreasing", f"{t.u_k} < {last}"))
            prev_u[t.mode] = t.u_k
            if t.target == 1:
                slack = (1 - t.u_k) * t.b
                if prev_slack is not None and slack < prev_slack:
                    bad((k, "(1 - u_k) b_k nondecreasing", f"{slack} < {prev_slack}"))
                prev_slack = slack
        if t.alpha < 0:
            bad((k, "alpha_k >= 0", str(t.alpha)))
        if t.alpha * t.n != t.g or t.g < 0:
            bad((k, "g_k = alpha_k n_k", f"g={t.g}, alpha*n={t.alpha * t.n}"))
        if Fraction(t.g, t.b) != t.s or not _is_even_int(Fraction(t.g, t.b)):
            bad((k, "s_k = g_k/b_k even", f"g={t.g}, b={t.b}, s={t.s}"))
        if t.eps <= 0:
            bad((k, "eps_k > 0", str(t.eps)))
        if prev_eps is not None and t.eps > prev_eps:
            bad((k, "eps_k nonincreasing", f"{t.eps} > {prev_eps}"))
        prev_eps = t.eps
        if t.r <= 0 or t.r % 2:
            bad((k, "r_k even", f"r={t.r}"))
        nxt = teams[idx + 1] if idx + 1 < len(teams) else None
        eps_next = nxt.eps if nxt else plan.next_eps
        tot = t.n + t.g + t.r
        lo = Fraction(t.r, 2) / tot
        hi = (Fraction(t.r, 2) + t.n + t.g) / tot
        if not (half - eps_next < lo <= hi < half + eps_next):
            bad((k, "r_k sandwich", f"{float(lo):.6f} .. {float(hi):.6f} vs eps={eps_next}"))
        if nxt is not None:
            if nxt.n != tot:
                bad((k, "n_{k+1} = n_k + g_k + r_k", f"{nxt.n} != {tot}"))
            a_next, b_next = nxt.alpha, nxt.b
        else:
            u_next = plan.next_u
            a_next = (u_next - half) / (1 - u_next)
            b_next = _floor_log2(k + 3)
        if not _is_even_int(tot * a_next / b_next):
            bad((k, "n_{k+1} alpha_{k+1}/b_{k+1} even", str(tot * a_next / b_next)))
    return rep
