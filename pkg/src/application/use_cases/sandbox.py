"""
Use cases behind the sandbox service: episode sessions, tool invocation
and user-simulator steps.

Every session owns a deep copy of the seed store. Requests to one session
are serialized by its lock; different sessions never share state.
"""

from dataclasses import dataclass
from datetime import datetime
from typing import Any

import structlog

from src.application.exceptions import (
    SessionNotFoundException,
    StepLimitExceededException,
    TaskNotFoundException,
)
from src.application.ports.actors import UserSimulatorFactory
from src.application.ports.repositories import SessionRepository, TaskRepository
from src.application.sessions import SandboxSession
from src.domain.entities.retail import EntityStore
from src.domain.entities.session import Session, utc_now
from src.domain.entities.tools import ToolResult, ToolSpec
from src.domain.entities.trajectory import STOP_TOKEN, Speaker, Utterance
from src.domain.services.retail_env import snapshot, state_hash
from src.domain.services.toolkit import ToolRegistry
from src.domain.value_objects.session_id import SessionId
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)


class SessionLookup:
    """Resolves live sessions, dropping the ones idle past the timeout first."""

    def __init__(self, sessions: SessionRepository, idle_timeout_seconds: float = 3600.0):
        self._sessions = sessions
        self._idle_timeout = idle_timeout_seconds

    async def purge(self, now: datetime | None = None) -> int:
        dropped = await self._sessions.purge_idle(now or utc_now(), self._idle_timeout)
        if dropped:
            logger.info("idle sessions expired", count=dropped)
        return dropped

    async def get(self, session_id: str) -> SandboxSession:
        await self.purge()
        try:
            key = SessionId.from_string(session_id)
        except ValueError:
            raise SessionNotFoundException(session_id) from None
        found = await self._sessions.find_by_id(key)
        if found is None:
            raise SessionNotFoundException(session_id)
        return found


@dataclass
class CreateEpisodeResponse:
    session_id: str
    task_id: str
    opening: str
    state_hash: str
    max_turns: int


class CreateEpisodeUseCase:
    def __init__(
        self,
        sessions: SessionRepository,
        tasks: TaskRepository,
        seed_store: EntityStore,
        users: UserSimulatorFactory,
        lookup: SessionLookup,
        max_turns: int = 30,
    ):
        self._sessions = sessions
        self._tasks = tasks
        self._seed_store = seed_store
        self._users = users
        self._lookup = lookup
        self._max_turns = max_turns

    async def execute(self, task_id: str) -> CreateEpisodeResponse:
        """
        Raises:
            TaskNotFoundException: Unknown task id
            TransportError: The user simulator could not produce its opening
        """
        await self._lookup.purge()
        task = await self._tasks.get(task_id)
        if task is None:
            raise TaskNotFoundException(task_id)

        user = self._users.for_task(task)
        opening = await user.first_message()
        session = Session(
            session_id=SessionId.generate(),
            store=snapshot(self._seed_store),
            task_ref=task.task_id,
            max_turns=self._max_turns,
            history=[Utterance(Speaker.USER, opening)],
        )
        await self._sessions.save(SandboxSession(session=session, user=user, opening=opening))
        logger.info("episode created", session_id=str(session.session_id), task_id=task.task_id)
        return CreateEpisodeResponse(
            session_id=str(session.session_id),
            task_id=task.task_id,
            opening=opening,
            state_hash=state_hash(session.store).hex,
            max_turns=session.max_turns,
        )


@dataclass
class EpisodeStatus:
    session_id: str
    task_id: str
    step_counter: int
    max_turns: int
    store_version: int
    state_hash: str
    created_at: datetime
    last_active: datetime

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "task_id": self.task_id,
            "step_counter": self.step_counter,
            "max_turns": self.max_turns,
            "store_version": self.store_version,
            "state_hash": self.state_hash,
            "created_at": self.created_at.isoformat(),
            "last_active": self.last_active.isoformat(),
        }


class GetEpisodeUseCase:
    def __init__(self, lookup: SessionLookup):
        self._lookup = lookup

    async def execute(self, session_id: str) -> EpisodeStatus:
        sandbox = await self._lookup.get(session_id)
        async with sandbox.lock:
            session = sandbox.session
            return EpisodeStatus(
                session_id=str(session.session_id),
                task_id=session.task_ref,
                step_counter=session.step_counter,
                max_turns=session.max_turns,
                store_version=session.store.version,
                state_hash=state_hash(session.store).hex,
                created_at=session.created_at,
                last_active=session.last_active,
            )


class CloseEpisodeUseCase:
    def __init__(self, sessions: SessionRepository, lookup: SessionLookup):
        self._sessions = sessions
        self._lookup = lookup

    async def execute(self, session_id: str) -> None:
        sandbox = await self._lookup.get(session_id)
        await self._sessions.delete(sandbox.session.session_id)
        logger.info("episode closed", session_id=session_id)


class ListToolsUseCase:
    def __init__(self, registry: ToolRegistry):
        self._registry = registry

    def execute(self) -> list[ToolSpec]:
        return self._registry.list_tools()


class InvokeToolUseCase:
    def __init__(self, registry: ToolRegistry, lookup: SessionLookup):
        self._registry = registry
        self._lookup = lookup

    async def execute(self, session_id: str, name: str, arguments: dict[str, Any]) -> ToolResult:
        """
        Execute a tool against the session's store.

        Raises:
            SessionNotFoundException: Unknown or expired session
            UnknownToolError: Tool is not registered
            ToolArgumentError: Arguments do not match the tool schema
        """
        sandbox = await self._lookup.get(session_id)
        call = ToolCall(name=name, arguments=dict(arguments))
        self._registry.validate(call)
        async with sandbox.lock:
            result = self._registry.execute(sandbox.session.store, call)
            sandbox.session.touch()
        logger.info(
            "tool invoked",
            session_id=session_id,
            tool=name,
            status=result.status.value,
            error_code=result.error_code,
        )
        return result


@dataclass
class UserStepResponse:
    reply: str
    step_counter: int
    done: bool


class UserStepUseCase:
    def __init__(self, lookup: SessionLookup):
        self._lookup = lookup

    async def execute(self, session_id: str, agent_message: str) -> UserStepResponse:
        """
        Advance the session's user simulator by one reply.

        Raises:
            SessionNotFoundException: Unknown or expired session
            StepLimitExceededException: The session already used max_turns steps
            TransportError: The user simulator is unreachable
        """
        sandbox = await self._lookup.get(session_id)
        async with sandbox.lock:
            session = sandbox.session
            if session.step_counter >= session.max_turns:
                raise StepLimitExceededException(session_id, session.max_turns)
            # history is committed only once the reply arrives
            history = [*session.history, Utterance(Speaker.AGENT, agent_message)]
            reply = await sandbox.user.next_message(list(history))
            session.history[:] = [*history, Utterance(Speaker.USER, reply)]
            session.step_counter += 1
            session.touch()
            return UserStepResponse(
                reply=reply,
                step_counter=session.step_counter,
                done=reply.strip() == STOP_TOKEN,
            )
