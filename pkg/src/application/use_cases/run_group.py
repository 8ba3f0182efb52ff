"""
Use case: collect a group of rollouts for one task.
"""

import asyncio
from typing import Optional

import structlog

from src.application.exceptions import TransportError
from src.application.ports.actors import ActorProvider
from src.application.use_cases.run_episode import RunEpisodeUseCase
from src.domain.entities.task import TaskSpec
from src.domain.entities.trajectory import RolloutGroup, Trajectory, TrajectoryStatus

logger = structlog.get_logger(__name__)


def scalar_reward(trajectory: Trajectory):
    """TARL total when a breakdown exists, otherwise the terminal reward."""
    if trajectory.breakdown is not None:
        return trajectory.breakdown.total
    return trajectory.terminal_reward or 0


class RunGroupUseCase:
    """
    Runs `n` independent episodes, each on fresh actors and a fresh store.

    Episodes may run concurrently up to `max_concurrency`; results are
    stamped with their rollout index and returned in index order.
    """

    def __init__(self, runner: RunEpisodeUseCase, provider: ActorProvider, max_concurrency: int = 1):
        if max_concurrency < 1:
            raise ValueError("max_concurrency must be at least 1")
        self._runner = runner
        self._provider = provider
        self._semaphore = asyncio.Semaphore(max_concurrency)

    async def _one(self, task: TaskSpec, rollout_index: int) -> Trajectory:
        async with self._semaphore:
            try:
                actors = await self._provider.actors_for(task, rollout_index)
            except TransportError as exc:
                logger.warning("actors unavailable", task_id=task.task_id, rollout_index=rollout_index, error=exc.message)
                return Trajectory(
                    task_id=task.task_id,
                    rollout_index=rollout_index,
                    prompt=task.user_instruction,
                    status=TrajectoryStatus.TRANSPORT_ERROR,
                    terminal_reward=0,
                    error=exc.message,
                )
            try:
                return await self._runner.execute(task, actors, rollout_index=rollout_index)
            finally:
                await actors.executor.close()

    async def execute(self, task: TaskSpec, n: Optional[int] = None, first_index: int = 0) -> RolloutGroup:
        """Rollouts are numbered from `first_index`, so repeated draws of a task stay distinct."""
        count = self._runner.config.num_rollout if n is None else n
        if count < 1:
            raise ValueError("a group needs at least one rollout")
        if first_index < 0:
            raise ValueError("first_index must not be negative")
        indices = range(first_index, first_index + count)
        trajectories = await asyncio.gather(*(self._one(task, i) for i in indices))
        ordered = sorted(trajectories, key=lambda t: t.rollout_index)
        logger.info("group collected", task_id=task.task_id, size=len(ordered))
        return RolloutGroup(trajectories=ordered, scalar_rewards=[scalar_reward(t) for t in ordered])
