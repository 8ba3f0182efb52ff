# Persistence mechanisms

from .memory_store import MemorySessionStore
from .trajectory_log import JsonlTrajectoryLog

__all__ = [
    "JsonlTrajectoryLog",
    "MemorySessionStore",
]
