# API controllers

from .sandbox_controller import SandboxController

__all__ = [
    "SandboxController",
]
