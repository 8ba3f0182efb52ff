"""
Main entry point for the FastAPI application.

Exposes the retail tool sandbox: episode sessions with isolated stores,
tool listing and invocation, user-simulator steps and trajectory
persistence.
"""

from contextlib import asynccontextmanager
from datetime import datetime, timezone
from typing import Any

import structlog
from fastapi import Body, FastAPI, status

from src.config.logging import configure_logging
from src.config.settings import get_settings
from src.infrastructure.config.dependency_injection import get_container
from src.interfaces.api.controllers.sandbox_controller import SandboxController
from src.interfaces.api.middleware.error_handler import ErrorHandlerMiddleware, register_error_handlers
from src.interfaces.api.schemas.sandbox_schemas import (
    CreateEpisodeRequest,
    CreateEpisodeResponse,
    EpisodeStatusResponse,
    ErrorResponse,
    HealthResponse,
    InvokeToolRequest,
    InvokeToolResponse,
    ToolListResponse,
    TrajectoryCreatedResponse,
    UserStepRequest,
    UserStepResponse,
)

logger = structlog.get_logger(__name__)

API_VERSION = "1.0.0"
ERRORS = {
    400: {"model": ErrorResponse, "description": "bad_request"},
    404: {"model": ErrorResponse, "description": "not_found"},
    409: {"model": ErrorResponse, "description": "tool_error"},
    429: {"model": ErrorResponse, "description": "limit_exceeded"},
    502: {"model": ErrorResponse, "description": "transport"},
}


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Load seed, tasks and tool roster before serving; close clients on shutdown."""
    container = get_container()
    logger.info("starting tool sandbox", environment=container.settings.environment)
    container.warm_up()
    try:
        yield
    finally:
        sessions = await container.memory_store.count()
        await container.aclose()
        logger.info("tool sandbox stopped", open_sessions=sessions)


def create_app() -> FastAPI:
    settings = get_container().settings
    configure_logging(settings.log_level, settings.log_json)

    app = FastAPI(
        title="Retail Tool Sandbox",
        description=(
            "Session-scoped retail tool environment for agent rollouts: "
            "isolated store snapshots, tool invocation and simulated users."
        ),
        version=API_VERSION,
        docs_url="/docs",
        redoc_url="/redoc",
        lifespan=lifespan,
    )
    app.add_middleware(ErrorHandlerMiddleware)
    register_error_handlers(app)

    controller = SandboxController()

    @app.get("/tools", response_model=ToolListResponse, tags=["tools"], summary="List tools")
    async def list_tools_endpoint() -> ToolListResponse:
        return controller.list_tools()

    @app.post(
        "/episodes",
        response_model=CreateEpisodeResponse,
        status_code=status.HTTP_201_CREATED,
        tags=["episodes"],
        responses=ERRORS,
        summary="Open an episode on a fresh store snapshot",
    )
    async def create_episode_endpoint(request: CreateEpisodeRequest) -> CreateEpisodeResponse:
        return await controller.create_episode(request)

    @app.get("/episodes/{session_id}", response_model=EpisodeStatusResponse, tags=["episodes"], responses=ERRORS)
    async def get_episode_endpoint(session_id: str) -> EpisodeStatusResponse:
        return await controller.get_episode(session_id)

    @app.delete(
        "/episodes/{session_id}", status_code=status.HTTP_204_NO_CONTENT, tags=["episodes"], responses=ERRORS
    )
    async def close_episode_endpoint(session_id: str) -> None:
        await controller.close_episode(session_id)

    @app.post(
        "/episodes/{session_id}/tools/{name}",
        response_model=InvokeToolResponse,
        tags=["tools"],
        responses=ERRORS,
        summary="Invoke a tool against the episode's store",
    )
    async def invoke_tool_endpoint(session_id: str, name: str, request: InvokeToolRequest) -> InvokeToolResponse:
        return await controller.invoke_tool(session_id, name, request)

    @app.post(
        "/episodes/{session_id}/user-step",
        response_model=UserStepResponse,
        tags=["episodes"],
        responses=ERRORS,
        summary="Advance the user simulator by one reply",
    )
    async def user_step_endpoint(session_id: str, request: UserStepRequest) -> UserStepResponse:
        return await controller.user_step(session_id, request)

    @app.post(
        "/trajectories",
        response_model=TrajectoryCreatedResponse,
        status_code=status.HTTP_201_CREATED,
        tags=["trajectories"],
        responses=ERRORS,
    )
    async def persist_trajectory_endpoint(record: dict[str, Any] = Body(...)) -> TrajectoryCreatedResponse:
        return await controller.persist_trajectory(record)

    @app.get("/trajectories/{record_id}", tags=["trajectories"], responses=ERRORS)
    async def fetch_trajectory_endpoint(record_id: str) -> dict[str, Any]:
        return await controller.fetch_trajectory(record_id)

    @app.get("/health", response_model=HealthResponse, tags=["health"], summary="Health check")
    async def health_endpoint() -> HealthResponse:
        return await controller.health_check()

    @app.get("/", tags=["info"], summary="API Info")
    async def root_endpoint() -> dict[str, Any]:
        return {
            "name": "Retail Tool Sandbox",
            "version": API_VERSION,
            "endpoints": {
                "tools": "/tools",
                "episodes": "/episodes",
                "trajectories": "/trajectories",
                "health": "/health",
                "docs": "/docs",
            },
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "status": "operational",
        }

    app.openapi_tags = [
        {"name": "episodes", "description": "Episode sessions and user-simulator steps"},
        {"name": "tools", "description": "Tool listing and invocation"},
        {"name": "trajectories", "description": "Append-only trajectory log"},
        {"name": "health", "description": "System monitoring and health check endpoints"},
        {"name": "info", "description": "API information"},
    ]
    return app


app = create_app()


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("src.interfaces.main:app", **get_settings().get_uvicorn_config())
