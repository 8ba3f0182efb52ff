# Configuration and dependency injection

from .dependency_injection import DependencyContainer, get_container

__all__ = [
    "DependencyContainer",
    "get_container",
]
