# Domain Layer - Business Logic

# Entities
from .entities import EntityStore, TaskSpec, Trajectory, Turn

# Value Objects
from .value_objects import RewardBreakdown, SessionId, ToolCall, TurnScores, VerifyReport

# Exceptions
from .exceptions import (
    AdjudicationError,
    DomainException,
    PreconditionViolation,
    ReactParseError,
    TrajectoryDecodeError,
)

__all__ = [
    # Entities
    "EntityStore",
    "TaskSpec",
    "Trajectory",
    "Turn",

    # Value Objects
    "RewardBreakdown",
    "SessionId",
    "ToolCall",
    "TurnScores",
    "VerifyReport",

    # Exceptions
    "AdjudicationError",
    "DomainException",
    "PreconditionViolation",
    "ReactParseError",
    "TrajectoryDecodeError",
]
