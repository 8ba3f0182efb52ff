"""
Repository ports: tasks, live sandbox sessions and the trajectory log.
"""

from abc import ABC, abstractmethod
from datetime import datetime
from typing import Optional

from src.domain.entities.task import TaskSpec
from src.domain.entities.trajectory import Trajectory
from src.application.sessions import SandboxSession
from src.domain.value_objects.session_id import SessionId


class TaskRepository(ABC):
    @abstractmethod
    async def get(self, task_id: str) -> Optional[TaskSpec]:
        pass

    @abstractmethod
    async def list_all(self) -> list[TaskSpec]:
        pass


class SessionRepository(ABC):
    """
    Store of live sandbox sessions.

    Sessions never share mutable state.
    """

    @abstractmethod
    async def save(self, session: SandboxSession) -> None:
        pass

    @abstractmethod
    async def find_by_id(self, session_id: SessionId) -> Optional[SandboxSession]:
        pass

    @abstractmethod
    async def delete(self, session_id: SessionId) -> bool:
        pass

    @abstractmethod
    async def purge_idle(self, now: datetime, idle_seconds: float) -> int:
        """Drop sessions idle longer than `idle_seconds`; return how many were dropped."""

    @abstractmethod
    async def count(self) -> int:
        pass


class TrajectoryRepository(ABC):
    """Append-only trajectory log with lookup by record id."""

    @abstractmethod
    async def append(self, trajectory: Trajectory) -> str:
        """
        Persist a trajectory.

        Returns:
            The new record id

        Raises:
            RepositoryException: If the record cannot be written
        """

    @abstractmethod
    async def fetch(self, record_id: str) -> Optional[Trajectory]:
        pass

    @abstractmethod
    async def count(self) -> int:
        pass

    @abstractmethod
    async def health_check(self) -> bool:
        pass
