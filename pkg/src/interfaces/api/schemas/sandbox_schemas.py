"""
Pydantic schemas for the sandbox API.

Request and response bodies for episode sessions, tool listing and
invocation, user-simulator steps and trajectory persistence.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

WireErrorCode = Literal["not_found", "bad_request", "tool_error", "limit_exceeded", "transport"]


class ToolParameterSchema(BaseModel):
    name: str
    type: str


class ToolDescriptorSchema(BaseModel):
    name: str
    kind: Literal["read", "write"]
    parameters: list[ToolParameterSchema]
    description: str
    mutates: list[str]


class ToolListResponse(BaseModel):
    tools: list[ToolDescriptorSchema]
    count: int


class CreateEpisodeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    task_id: str = Field(..., min_length=1, description="Task to open a session for")

    @field_validator("task_id")
    @classmethod
    def validate_task_id(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("task_id cannot be blank")
        return v.strip()


class CreateEpisodeResponse(BaseModel):
    session_id: str
    task_id: str
    opening: str = Field(..., description="First user message of the episode")
    state_hash: str
    max_turns: int


class EpisodeStatusResponse(BaseModel):
    session_id: str
    task_id: str
    step_counter: int
    max_turns: int
    store_version: int
    state_hash: str
    created_at: str
    last_active: str


class InvokeToolRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    arguments: dict[str, Any] = Field(default_factory=dict)


class ToolResultSchema(BaseModel):
    status: Literal["ok", "error"]
    payload: Any = None
    mutated: bool = False
    error_code: Optional[str] = None
    error_message: Optional[str] = None


class InvokeToolResponse(BaseModel):
    result: ToolResultSchema
    state_hash: str


class UserStepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    message: str = Field(..., description="Last agent message addressed to the user")


class UserStepResponse(BaseModel):
    reply: str
    step_counter: int
    done: bool


class TrajectoryCreatedResponse(BaseModel):
    record_id: str


class ErrorResponse(BaseModel):
    """Body of every error response."""

    error: WireErrorCode
    message: str
    details: dict[str, Any] = Field(default_factory=dict)
    result: Optional[ToolResultSchema] = None


class HealthResponse(BaseModel):
    status: str = Field(..., description="'healthy' or 'degraded'")
    components: dict[str, bool]
    timestamp: str
