# Pydantic schemas for API validation

from .sandbox_schemas import (
    CreateEpisodeRequest,
    CreateEpisodeResponse,
    EpisodeStatusResponse,
    ErrorResponse,
    HealthResponse,
    InvokeToolRequest,
    InvokeToolResponse,
    ToolDescriptorSchema,
    ToolListResponse,
    ToolResultSchema,
    TrajectoryCreatedResponse,
    UserStepRequest,
    UserStepResponse,
)

__all__ = [
    "CreateEpisodeRequest",
    "CreateEpisodeResponse",
    "EpisodeStatusResponse",
    "ErrorResponse",
    "HealthResponse",
    "InvokeToolRequest",
    "InvokeToolResponse",
    "ToolDescriptorSchema",
    "ToolListResponse",
    "ToolResultSchema",
    "TrajectoryCreatedResponse",
    "UserStepRequest",
    "UserStepResponse",
]
