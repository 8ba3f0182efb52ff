# Infrastructure Layer - External concerns implementation
#
# The dependency container lives in `src.infrastructure.config`; it is not
# re-exported here because it imports the settings module, which in turn
# needs this package's exceptions.

# Persistence
from .persistence import JsonlTrajectoryLog, MemorySessionStore

# Repositories
from .repositories import InMemoryTaskRepository, MemorySessionRepository

# Exceptions
from .exceptions import (
    ConfigurationException,
    InfrastructureException,
    MemoryRepositoryException,
    PersistenceException,
)

__all__ = [
    # Persistence
    "JsonlTrajectoryLog",
    "MemorySessionStore",

    # Repositories
    "InMemoryTaskRepository",
    "MemorySessionRepository",

    # Exceptions
    "ConfigurationException",
    "InfrastructureException",
    "MemoryRepositoryException",
    "PersistenceException",
]
