"""
In-memory store for sandbox sessions.

Thread-safe (asyncio) dictionary keyed by session id.
"""

import asyncio
from datetime import datetime
from typing import Dict, Optional

from src.application.sessions import SandboxSession
from src.infrastructure.exceptions import MemoryRepositoryException


class MemorySessionStore:
    """
    Async-safe in-memory session store.

    The store-level lock guards the dictionary only; each session carries
    its own lock for request serialization.
    """

    def __init__(self):
        self._sessions: Dict[str, SandboxSession] = {}
        self._lock = asyncio.Lock()

    async def store(self, session: SandboxSession) -> None:
        try:
            async with self._lock:
                self._sessions[session.session_id] = session
        except Exception as e:
            raise MemoryRepositoryException(f"Failed to store session: {e}", "store")

    async def retrieve(self, session_id: str) -> Optional[SandboxSession]:
        async with self._lock:
            return self._sessions.get(session_id)

    async def delete(self, session_id: str) -> bool:
        async with self._lock:
            return self._sessions.pop(session_id, None) is not None

    async def purge_idle(self, now: datetime, idle_seconds: float) -> int:
        """Drop sessions whose last activity is older than `idle_seconds`."""
        async with self._lock:
            expired = [
                key for key, sandbox in self._sessions.items()
                if sandbox.session.idle_seconds(now) > idle_seconds
            ]
            for key in expired:
                del self._sessions[key]
            return len(expired)

    async def count(self) -> int:
        async with self._lock:
            return len(self._sessions)

    async def clear(self) -> None:
        async with self._lock:
            self._sessions.clear()

    async def health_check(self) -> bool:
        try:
            async with self._lock:
                _ = len(self._sessions)
                return True
        except Exception:
            return False
