"""
Task file codec.

A task file is a JSON array of task objects, or one task object per line.
"""

import json
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.domain.entities.task import DomainTag, ScriptStep, TaskSpec
from src.domain.value_objects.tool_call import ToolCall
from src.infrastructure.exceptions import ConfigurationException


class ToolCallModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    arguments: dict[str, Any] = Field(default_factory=dict)


class ScriptStepModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    trigger: str
    reply: str


class TaskModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    task_id: str = Field(min_length=1)
    user_instruction: str
    domain_tag: DomainTag = DomainTag.RETAIL_TEXT
    ground_truth_calls: list[ToolCallModel] = Field(default_factory=list)
    seed_ref: str = "retail"
    expected_answer: Optional[int] = None
    expected_outputs: Optional[list[str]] = None
    user_opening: Optional[str] = None
    user_script: list[ScriptStepModel] = Field(default_factory=list)
    user_fallback: Optional[str] = None
    policy_script: Optional[list[str]] = None

    @model_validator(mode="after")
    def _math_needs_answer(self) -> "TaskModel":
        if self.domain_tag == DomainTag.MATH and self.expected_answer is None:
            raise ValueError("math tasks need expected_answer")
        return self

    def to_domain(self) -> TaskSpec:
        return TaskSpec(
            task_id=self.task_id,
            user_instruction=self.user_instruction,
            domain_tag=self.domain_tag,
            ground_truth_calls=tuple(ToolCall(c.name, dict(c.arguments)) for c in self.ground_truth_calls),
            seed_ref=self.seed_ref,
            expected_answer=self.expected_answer,
            expected_outputs=tuple(self.expected_outputs) if self.expected_outputs is not None else None,
            user_script=tuple(ScriptStep(s.trigger, s.reply) for s in self.user_script),
            user_opening=self.user_opening,
            user_fallback=self.user_fallback,
        )


def parse_tasks(text: str, source: str = "<tasks>") -> list[TaskModel]:
    """
    Raises:
        ConfigurationException: Invalid JSON, schema violation or duplicate task ids
    """
    stripped = text.strip()
    try:
        if stripped.startswith("["):
            raw = json.loads(stripped)
        else:
            raw = [json.loads(line) for line in stripped.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise ConfigurationException(f"invalid JSON: {exc.msg} at line {exc.lineno}", source) from exc

    models: list[TaskModel] = []
    for position, item in enumerate(raw):
        try:
            models.append(TaskModel.model_validate(item))
        except ValidationError as exc:
            first = exc.errors()[0]
            path = ".".join(str(p) for p in first["loc"]) or "<root>"
            raise ConfigurationException(f"task #{position} at {path}: {first['msg']}", source) from exc

    seen: set[str] = set()
    for model in models:
        if model.task_id in seen:
            raise ConfigurationException(f"duplicate task_id {model.task_id}", source)
        seen.add(model.task_id)
    return models


def load_tasks(path: Path | str) -> list[TaskModel]:
    target = Path(path)
    if not target.is_file():
        raise ConfigurationException("task file not found", str(target))
    return parse_tasks(target.read_text(encoding="utf-8"), str(target))
