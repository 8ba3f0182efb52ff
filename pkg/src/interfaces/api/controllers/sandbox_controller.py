"""
Controller for the sandbox API.

Translates between HTTP bodies and the sandbox use cases. Errors are not
caught here; the error handlers map them to wire error codes.
"""

import json
from datetime import datetime, timezone
from typing import Any

import structlog

from src.infrastructure.config.dependency_injection import DependencyContainer, get_container
from src.infrastructure.serialization.trajectory_codec import deserialize, to_record
from src.interfaces.api.middleware.error_handler import ToolExecutionFailed
from src.interfaces.api.schemas.sandbox_schemas import (
    CreateEpisodeRequest,
    CreateEpisodeResponse,
    EpisodeStatusResponse,
    HealthResponse,
    InvokeToolRequest,
    InvokeToolResponse,
    ToolListResponse,
    TrajectoryCreatedResponse,
    UserStepRequest,
    UserStepResponse,
)

logger = structlog.get_logger(__name__)


class SandboxController:
    def __init__(self, container: DependencyContainer | None = None):
        self._container = container

    @property
    def container(self) -> DependencyContainer:
        return self._container or get_container()

    def list_tools(self) -> ToolListResponse:
        specs = self.container.list_tools_use_case.execute()
        return ToolListResponse(tools=[s.to_descriptor() for s in specs], count=len(specs))

    async def create_episode(self, request: CreateEpisodeRequest) -> CreateEpisodeResponse:
        created = await self.container.create_episode_use_case.execute(request.task_id)
        return CreateEpisodeResponse(
            session_id=created.session_id,
            task_id=created.task_id,
            opening=created.opening,
            state_hash=created.state_hash,
            max_turns=created.max_turns,
        )

    async def get_episode(self, session_id: str) -> EpisodeStatusResponse:
        found = await self.container.get_episode_use_case.execute(session_id)
        return EpisodeStatusResponse(**found.to_dict())

    async def close_episode(self, session_id: str) -> None:
        await self.container.close_episode_use_case.execute(session_id)

    async def invoke_tool(self, session_id: str, name: str, request: InvokeToolRequest) -> InvokeToolResponse:
        result = await self.container.invoke_tool_use_case.execute(session_id, name, request.arguments)
        if not result.ok:
            raise ToolExecutionFailed(name, result)
        status = await self.container.get_episode_use_case.execute(session_id)
        return InvokeToolResponse(result=result.to_dict(), state_hash=status.state_hash)

    async def user_step(self, session_id: str, request: UserStepRequest) -> UserStepResponse:
        step = await self.container.user_step_use_case.execute(session_id, request.message)
        return UserStepResponse(reply=step.reply, step_counter=step.step_counter, done=step.done)

    async def persist_trajectory(self, record: dict[str, Any]) -> TrajectoryCreatedResponse:
        trajectory = deserialize(json.dumps(record))
        record_id = await self.container.persist_trajectory_use_case.execute(trajectory)
        return TrajectoryCreatedResponse(record_id=record_id)

    async def fetch_trajectory(self, record_id: str) -> dict[str, Any]:
        trajectory = await self.container.fetch_trajectory_use_case.execute(record_id)
        return to_record(trajectory)

    async def health_check(self) -> HealthResponse:
        components = await self.container.health_check()
        return HealthResponse(
            status="healthy" if all(components.values()) else "degraded",
            components=components,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
