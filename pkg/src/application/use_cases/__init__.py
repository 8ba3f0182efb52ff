# Use Cases - Application business logic

from .compute_advantages import AdvantageRecord, Algorithm, ComputeAdvantagesUseCase
from .evaluate import EvaluateUseCase, EvaluationReport
from .run_episode import EpisodeConfig, RunEpisodeUseCase
from .run_group import RunGroupUseCase, scalar_reward
from .sandbox import (
    CloseEpisodeUseCase,
    CreateEpisodeResponse,
    CreateEpisodeUseCase,
    EpisodeStatus,
    GetEpisodeUseCase,
    InvokeToolUseCase,
    ListToolsUseCase,
    SessionLookup,
    UserStepResponse,
    UserStepUseCase,
)
from .score_trajectory import ScoreTrajectoryUseCase
from .trajectories import FetchTrajectoryUseCase, PersistTrajectoryUseCase

__all__ = [
    # Rollouts
    "EpisodeConfig",
    "RunEpisodeUseCase",
    "RunGroupUseCase",
    "scalar_reward",

    # Rewards and evaluation
    "ScoreTrajectoryUseCase",
    "Algorithm",
    "AdvantageRecord",
    "ComputeAdvantagesUseCase",
    "EvaluateUseCase",
    "EvaluationReport",

    # Sandbox
    "SessionLookup",
    "CreateEpisodeUseCase",
    "CreateEpisodeResponse",
    "GetEpisodeUseCase",
    "EpisodeStatus",
    "CloseEpisodeUseCase",
    "ListToolsUseCase",
    "InvokeToolUseCase",
    "UserStepUseCase",
    "UserStepResponse",
    "PersistTrajectoryUseCase",
    "FetchTrajectoryUseCase",
]
