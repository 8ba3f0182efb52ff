"""
Turn-level adjudicated rewards.

The terminal reward is scaled by 10. A major deviation (-1) contributes -5;
every other turn contributes score * cap / T so that a flawless trajectory
earns the full cap regardless of its length. All arithmetic is exact.
"""

from enum import Enum
from fractions import Fraction
from typing import Sequence

from src.domain.exceptions import RewardConstraintError
from src.domain.value_objects.rewards import RewardBreakdown, ScoringMode, TrajectoryCategory, TurnScores

TERMINAL_SCALE = Fraction(10)
MAJOR_DEVIATION = Fraction(-5)


class TarlScale(str, Enum):
    """Positive per-turn scale: cap/T with cap 5 (default) or the literal 1/T."""

    CAPPED = "capped"
    LITERAL = "literal"

    @property
    def cap(self) -> Fraction:
        return Fraction(5) if self == TarlScale.CAPPED else Fraction(1)


def _check_terminal(terminal: int) -> None:
    if terminal not in (0, 1):
        raise RewardConstraintError(f"terminal reward must be 0 or 1, got {terminal}")


def combine(
    scores: TurnScores | Sequence[int],
    terminal: int,
    num_turns: int,
    scale: TarlScale = TarlScale.CAPPED,
) -> RewardBreakdown:
    """
    Combine turn scores with the terminal reward.

    Raises:
        RewardConstraintError: Length differs from T, T < 1, an out-of-range
            score, or more than one -1
    """
    values = tuple(scores.scores if isinstance(scores, TurnScores) else scores)
    _check_terminal(terminal)
    if num_turns < 1:
        raise RewardConstraintError("T must be at least 1")
    if len(values) != num_turns:
        raise RewardConstraintError(f"{len(values)} scores for {num_turns} turns")
    if any(s not in (-1, 0, 1) for s in values):
        raise RewardConstraintError("scores must be in {-1, 0, 1}")
    if values.count(-1) > 1:
        raise RewardConstraintError("at most one turn may score -1")

    per_turn = scale.cap / num_turns
    contributions = tuple(MAJOR_DEVIATION if s == -1 else s * per_turn for s in values)
    total = TERMINAL_SCALE * terminal + sum(contributions, Fraction(0))
    category = _category(terminal, total, contributions, scale.cap)
    return RewardBreakdown(
        terminal=terminal,
        turn_contributions=contributions,
        total=total,
        category=category,
        turn_cap=scale.cap,
        mode=ScoringMode.TARL,
    )


def _category(terminal: int, total: Fraction, contributions: Sequence[Fraction], cap: Fraction) -> TrajectoryCategory:
    if terminal == 1:
        return TrajectoryCategory.PERFECT if total == TERMINAL_SCALE + cap else TrajectoryCategory.GOOD
    if any(c == MAJOR_DEVIATION for c in contributions):
        return TrajectoryCategory.FAILED
    return TrajectoryCategory.GOOD_ATTEMPT


def categorize(breakdown: RewardBreakdown) -> TrajectoryCategory:
    """
    Category of a breakdown.

    A terminal failure with no major deviation is a GoodAttempt even at a
    total of exactly 0.
    """
    return _category(breakdown.terminal, breakdown.total, breakdown.turn_contributions, breakdown.turn_cap)


def terminal_only(terminal: int, mode: ScoringMode = ScoringMode.TERMINAL_ONLY) -> RewardBreakdown:
    """Breakdown from the verifier reward alone (total = 10 * R)."""
    _check_terminal(terminal)
    total = TERMINAL_SCALE * terminal
    category = TrajectoryCategory.GOOD if terminal == 1 else TrajectoryCategory.GOOD_ATTEMPT
    return RewardBreakdown(
        terminal=terminal,
        turn_contributions=(),
        total=total,
        category=category,
        mode=mode,
    )
