# Application Layer - Use Cases and Ports

# Use Cases
from .use_cases import (
    ComputeAdvantagesUseCase,
    EpisodeConfig,
    EvaluateUseCase,
    RunEpisodeUseCase,
    RunGroupUseCase,
    ScoreTrajectoryUseCase,
)

# Ports
from .ports import PolicyClient, ToolExecutor, TrajectoryRepository, TurnJudge, UserSimulator

# Exceptions
from .exceptions import (
    ApplicationException,
    RecordNotFoundException,
    RepositoryException,
    SessionNotFoundException,
    StepLimitExceededException,
    TaskNotFoundException,
    TransportError,
)

__all__ = [
    # Use Cases
    "ComputeAdvantagesUseCase",
    "EpisodeConfig",
    "EvaluateUseCase",
    "RunEpisodeUseCase",
    "RunGroupUseCase",
    "ScoreTrajectoryUseCase",

    # Ports
    "PolicyClient",
    "ToolExecutor",
    "TrajectoryRepository",
    "TurnJudge",
    "UserSimulator",

    # Exceptions
    "ApplicationException",
    "RecordNotFoundException",
    "RepositoryException",
    "SessionNotFoundException",
    "StepLimitExceededException",
    "TaskNotFoundException",
    "TransportError",
]
