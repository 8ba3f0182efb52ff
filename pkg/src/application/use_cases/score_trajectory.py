"""
Use case: attach turn scores and the reward breakdown to a trajectory.
"""

from typing import Optional

import structlog

from src.application.exceptions import TransportError
from src.application.ports.actors import TurnJudge
from src.domain.entities.task import TaskSpec
from src.domain.entities.trajectory import Trajectory
from src.domain.exceptions import AdjudicationError
from src.domain.services.tarl import TarlScale, combine, terminal_only
from src.domain.value_objects.rewards import ScoringMode

logger = structlog.get_logger(__name__)


class ScoreTrajectoryUseCase:
    """
    Scores trajectories with the judge, or with the terminal reward alone.

    A malformed verdict is retried `retries` times; after that (or on a
    transport failure) the trajectory falls back to terminal-only scoring
    and the breakdown is flagged as a judge fallback.
    """

    def __init__(
        self,
        judge: Optional[TurnJudge] = None,
        scale: TarlScale = TarlScale.CAPPED,
        retries: int = 1,
    ):
        self._judge = judge
        self._scale = scale
        self._retries = retries

    async def execute(
        self,
        trajectory: Trajectory,
        task: Optional[TaskSpec] = None,
        terminal_only_mode: bool = False,
    ) -> Trajectory:
        terminal = trajectory.terminal_reward or 0
        if terminal_only_mode or self._judge is None or task is None or trajectory.num_turns == 0:
            trajectory.turn_scores = None
            trajectory.breakdown = terminal_only(terminal)
            return trajectory

        log = logger.bind(task_id=trajectory.task_id, rollout_index=trajectory.rollout_index)
        for attempt in range(self._retries + 1):
            try:
                scores = await self._judge.adjudicate(trajectory, task.ground_truth, task.user_instruction)
            except AdjudicationError as exc:
                log.warning("judge verdict rejected", attempt=attempt, error=exc.message)
                continue
            except TransportError as exc:
                log.warning("judge unreachable", error=exc.message)
                break
            trajectory.turn_scores = scores
            trajectory.breakdown = combine(scores, terminal, trajectory.num_turns, self._scale)
            return trajectory

        trajectory.turn_scores = None
        trajectory.breakdown = terminal_only(terminal, mode=ScoringMode.JUDGE_FALLBACK)
        log.info("judge fallback to terminal-only scoring")
        return trajectory
