# Ports - Interfaces for external dependencies

from .actors import (
    ActorProvider,
    ChatMessages,
    EpisodeActors,
    PolicyClient,
    PolicyOutput,
    ToolExecutor,
    TurnJudge,
    UserSimulator,
    UserSimulatorFactory,
)
from .repositories import SessionRepository, TaskRepository, TrajectoryRepository

__all__ = [
    "ActorProvider",
    "ChatMessages",
    "EpisodeActors",
    "PolicyClient",
    "PolicyOutput",
    "SessionRepository",
    "TaskRepository",
    "ToolExecutor",
    "TrajectoryRepository",
    "TurnJudge",
    "UserSimulator",
    "UserSimulatorFactory",
]
