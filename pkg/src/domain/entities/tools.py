"""
Tool registry entities: tool specifications and execution results.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class ToolKind(str, Enum):
    READ = "read"
    WRITE = "write"


class ArgType(str, Enum):
    STRING = "string"
    STRING_LIST = "list-of-string"
    DECIMAL = "decimal"
    OBJECT = "object"


@dataclass(frozen=True)
class ToolSpec:
    """
    Published description of a tool.

    Write tools declare the entity collections they may mutate.
    """

    name: str
    kind: ToolKind
    arg_schema: tuple[tuple[str, ArgType], ...]
    description: str
    mutates: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == ToolKind.WRITE and not self.mutates:
            raise ValueError(f"write tool {self.name} must declare mutated collections")

    @property
    def parameters(self) -> dict[str, ArgType]:
        return dict(self.arg_schema)

    def to_descriptor(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind.value,
            "parameters": [{"name": n, "type": t.value} for n, t in self.arg_schema],
            "description": self.description,
            "mutates": list(self.mutates),
        }


class ToolStatus(str, Enum):
    OK = "ok"
    ERROR = "error"


@dataclass(frozen=True)
class ToolResult:
    """Result of a tool execution; `mutated` is true only for successful writes."""

    status: ToolStatus
    payload: Any = None
    mutated: bool = False
    error_code: Optional[str] = None
    error_message: Optional[str] = None

    def __post_init__(self) -> None:
        if self.mutated and self.status != ToolStatus.OK:
            raise ValueError("failed tool results cannot be mutating")

    @property
    def ok(self) -> bool:
        return self.status == ToolStatus.OK

    @classmethod
    def success(cls, payload: Any, mutated: bool = False) -> "ToolResult":
        return cls(status=ToolStatus.OK, payload=payload, mutated=mutated)

    @classmethod
    def failure(cls, error_code: str, message: str) -> "ToolResult":
        return cls(
            status=ToolStatus.ERROR,
            payload=None,
            mutated=False,
            error_code=error_code,
            error_message=message,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "payload": self.payload,
            "mutated": self.mutated,
            "error_code": self.error_code,
            "error_message": self.error_message,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ToolResult":
        return cls(
            status=ToolStatus(data["status"]),
            payload=data.get("payload"),
            mutated=bool(data.get("mutated", False)),
            error_code=data.get("error_code"),
            error_message=data.get("error_message"),
        )
