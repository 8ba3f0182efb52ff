# Value Objects - Immutable objects defined by their attributes

from .rewards import (
    Mismatch,
    RewardBreakdown,
    ScoringMode,
    TrajectoryCategory,
    TurnScores,
    VerifyReport,
)
from .session_id import SessionId
from .state_hash import StateHash
from .tool_call import ToolCall, call_multiset

__all__ = [
    "Mismatch",
    "RewardBreakdown",
    "ScoringMode",
    "SessionId",
    "StateHash",
    "ToolCall",
    "TrajectoryCategory",
    "TurnScores",
    "VerifyReport",
    "call_multiset",
]
