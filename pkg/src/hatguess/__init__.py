"""Hat guessing on infinitely many players: strategies, exact finite analysis,
team-plan generation and Monte Carlo estimation of correct-guess densities."""

from .core import ColorSpace, HatAssignment, OutcomeTrajectory, RandomSource, Tail
from .plan import TeamPlan, generate_plan, validate_plan
from .strategies import PRESETS, preset, strategy_from_spec

__all__ = [
    "ColorSpace", "HatAssignment", "OutcomeTrajectory", "RandomSource", "Tail",
    "TeamPlan", "generate_plan", "validate_plan", "PRESETS", "preset", "strategy_from_spec",
]
