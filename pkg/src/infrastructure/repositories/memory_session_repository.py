"""
In-memory implementation of the session repository.
"""

from datetime import datetime
from typing import Optional

from src.application.exceptions import RepositoryException
from src.application.ports.repositories import SessionRepository
from src.application.sessions import SandboxSession
from src.domain.value_objects.session_id import SessionId
from src.infrastructure.exceptions import MemoryRepositoryException
from src.infrastructure.persistence.memory_store import MemorySessionStore


class MemorySessionRepository(SessionRepository):
    """Translates store-level failures into repository exceptions."""

    def __init__(self, memory_store: MemorySessionStore):
        self._memory_store = memory_store

    async def save(self, session: SandboxSession) -> None:
        try:
            await self._memory_store.store(session)
        except MemoryRepositoryException as e:
            raise RepositoryException(f"Failed to save session: {e.message}")

    async def find_by_id(self, session_id: SessionId) -> Optional[SandboxSession]:
        return await self._memory_store.retrieve(str(session_id))

    async def delete(self, session_id: SessionId) -> bool:
        return await self._memory_store.delete(str(session_id))

    async def purge_idle(self, now: datetime, idle_seconds: float) -> int:
        return await self._memory_store.purge_idle(now, idle_seconds)

    async def count(self) -> int:
        return await self._memory_store.count()

    async def health_check(self) -> bool:
        return await self._memory_store.health_check()
