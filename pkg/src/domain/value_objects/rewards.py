"""
Reward value objects: judge turn scores, the TARL breakdown and the
verifier report.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional


class TrajectoryCategory(str, Enum):
    PERFECT = "Perfect"
    GOOD = "Good"
    GOOD_ATTEMPT = "GoodAttempt"
    FAILED = "Failed"


class ScoringMode(str, Enum):
    """How a trajectory's breakdown was produced."""

    TARL = "tarl"
    TERMINAL_ONLY = "terminal_only"
    JUDGE_FALLBACK = "judge_fallback"


@dataclass(frozen=True)
class TurnScores:
    """Per-turn judge scores in {-1, 0, 1} plus validation notes."""

    scores: tuple[int, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if any(s not in (-1, 0, 1) for s in self.scores):
            raise ValueError("turn scores must be in {-1, 0, 1}")

    @property
    def major_deviations(self) -> int:
        return sum(1 for s in self.scores if s == -1)

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class RewardBreakdown:
    """Scaled combination of the terminal reward and turn-level scores."""

    terminal: int
    turn_contributions: tuple[Fraction, ...]
    total: Fraction
    category: TrajectoryCategory
    turn_cap: Fraction = Fraction(5)
    mode: ScoringMode = ScoringMode.TARL

    @property
    def has_major_deviation(self) -> bool:
        return any(c == -5 for c in self.turn_contributions)

    def to_dict(self) -> dict[str, Any]:
        return {
            "terminal": self.terminal,
            "turn_contributions": [str(c) for c in self.turn_contributions],
            "total": str(self.total),
            "total_float": float(self.total),
            "category": self.category.value,
            "turn_cap": str(self.turn_cap),
            "mode": self.mode.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RewardBreakdown":
        return cls(
            terminal=int(data["terminal"]),
            turn_contributions=tuple(Fraction(c) for c in data["turn_contributions"]),
            total=Fraction(data["total"]),
            category=TrajectoryCategory(data["category"]),
            turn_cap=Fraction(data.get("turn_cap", "5")),
            mode=ScoringMode(data.get("mode", ScoringMode.TARL.value)),
        )


class Mismatch(str, Enum):
    MATCH = "match"
    WRONG_ARGS = "wrong_args"
    UNNECESSARY_WRITE = "unnecessary_write"
    MISSING_WRITE = "missing_write"


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the rule-based verifier."""

    reward: int
    mismatch: Mismatch
    details: tuple[dict[str, Any], ...] = field(default_factory=tuple)
    output_check: Optional[bool] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "reward": self.reward,
            "mismatch": self.mismatch.value,
            "details": [dict(d) for d in self.details],
            "output_check": self.output_check,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "VerifyReport":
        return cls(
            reward=int(data["reward"]),
            mismatch=Mismatch(data["mismatch"]),
            details=tuple(data.get("details") or ()),
            output_check=data.get("output_check"),
        )
