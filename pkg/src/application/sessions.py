"""
Application-level sandbox session: the domain session plus its user
simulator and the lock that serializes requests to it.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from src.domain.entities.session import Session

if TYPE_CHECKING:
    from src.application.ports.actors import UserSimulator


@dataclass
class SandboxSession:
    session: Session
    user: UserSimulator
    opening: str = ""
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)

    @property
    def session_id(self) -> str:
        return str(self.session.session_id)
