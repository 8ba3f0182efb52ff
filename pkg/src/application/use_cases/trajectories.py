"""
Use cases: persist and fetch trajectory records.
"""

import structlog

from src.application.exceptions import RecordNotFoundException
from src.application.ports.repositories import TrajectoryRepository
from src.domain.entities.trajectory import Trajectory

logger = structlog.get_logger(__name__)


class PersistTrajectoryUseCase:
    def __init__(self, repository: TrajectoryRepository):
        self._repository = repository

    async def execute(self, trajectory: Trajectory) -> str:
        record_id = await self._repository.append(trajectory)
        logger.info("trajectory persisted", record_id=record_id, task_id=trajectory.task_id)
        return record_id


class FetchTrajectoryUseCase:
    def __init__(self, repository: TrajectoryRepository):
        self._repository = repository

    async def execute(self, record_id: str) -> Trajectory:
        trajectory = await self._repository.fetch(record_id)
        if trajectory is None:
            raise RecordNotFoundException(record_id)
        return trajectory
