# Repository implementations

from .memory_session_repository import MemorySessionRepository
from .task_repository import InMemoryTaskRepository

__all__ = [
    "InMemoryTaskRepository",
    "MemorySessionRepository",
]
