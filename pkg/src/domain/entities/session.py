"""
Sandbox session entity: one episode's isolated store and conversation.
"""

from dataclasses import dataclass, field
from datetime import datetime, timezone

from src.domain.entities.retail import EntityStore
from src.domain.entities.trajectory import Utterance
from src.domain.value_objects.session_id import SessionId


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass
class Session:
    session_id: SessionId
    store: EntityStore
    task_ref: str
    max_turns: int = 30
    step_counter: int = 0
    history: list[Utterance] = field(default_factory=list)
    created_at: datetime = field(default_factory=utc_now)
    last_active: datetime = field(default_factory=utc_now)

    def __post_init__(self) -> None:
        if self.max_turns < 1:
            raise ValueError("max_turns must be at least 1")

    @property
    def steps_remaining(self) -> int:
        return self.max_turns - self.step_counter

    def touch(self) -> None:
        self.last_active = utc_now()

    def idle_seconds(self, now: datetime) -> float:
        return (now - self.last_active).total_seconds()
