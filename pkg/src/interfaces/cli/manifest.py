"""
Configuration files for the operator commands.

Relative paths inside a manifest resolve against the manifest's own
directory, and every referenced file must exist before any episode starts.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.application.use_cases.run_episode import EpisodeConfig
from src.domain.entities.task import DomainTag
from src.domain.services.tarl import TarlScale
from src.infrastructure.adapters.chat_client import ChatClientConfig
from src.infrastructure.exceptions import ConfigurationException

M = TypeVar("M", bound=BaseModel)


class _Manifest(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PolicyBackendConfig(_Manifest):
    backend: Literal["scripted", "chat"] = "scripted"
    chat: Optional[ChatClientConfig] = None

    @model_validator(mode="after")
    def _chat_needs_client(self) -> "PolicyBackendConfig":
        if self.backend == "chat" and self.chat is None:
            raise ValueError("chat policy backend needs a 'chat' client config")
        return self


class UserBackendConfig(_Manifest):
    backend: Literal["scripted", "llm"] = "scripted"
    chat: Optional[ChatClientConfig] = None

    @model_validator(mode="after")
    def _llm_needs_client(self) -> "UserBackendConfig":
        if self.backend == "llm" and self.chat is None:
            raise ValueError("llm user backend needs a 'chat' client config")
        return self


class EpisodeSettings(_Manifest):
    max_turns: int = Field(default=30, ge=1)
    temperature: float = Field(default=0.7, ge=0.0)
    top_p: float = Field(default=0.95, gt=0.0, le=1.0)
    num_rollout: int = Field(default=4, ge=1)
    intervention_enabled: bool = False
    intervention_limit: int = Field(default=2, ge=0)
    check_outputs: bool = False

    def to_config(self, num_rollout: Optional[int] = None) -> EpisodeConfig:
        values = self.model_dump()
        if num_rollout is not None:
            values["num_rollout"] = num_rollout
        return EpisodeConfig(**values)


class RunManifest(_Manifest):
    """Everything `run` needs: tasks, seed, backends, episode settings and output."""

    tasks_path: Path
    seed_path: Path
    output_path: Path
    policy: PolicyBackendConfig = Field(default_factory=PolicyBackendConfig)
    user: UserBackendConfig = Field(default_factory=UserBackendConfig)
    episode: EpisodeSettings = Field(default_factory=EpisodeSettings)
    enabled_tools: Optional[list[str]] = None
    policy_doc_path: Optional[Path] = None
    sandbox_url: Optional[str] = Field(default=None, description="Run episodes through a sandbox service")
    mix_schedule: Optional[list[DomainTag]] = Field(
        default=None, min_length=1, description="Domain tags cycled when drawing task batches"
    )
    mix_draws: Optional[int] = Field(default=None, ge=1, description="Batches to draw; defaults to the task count")

    def _resolve(self, base: Path) -> None:
        for name in ("tasks_path", "seed_path", "output_path", "policy_doc_path"):
            value = getattr(self, name)
            if value is not None and not value.is_absolute():
                setattr(self, name, base / value)

    def _check_paths(self, source: str) -> None:
        for name in ("tasks_path", "seed_path", "policy_doc_path"):
            value = getattr(self, name)
            if value is not None and not value.is_file():
                raise ConfigurationException(f"{name} does not exist: {value}", source)


class JudgeManifest(_Manifest):
    chat: ChatClientConfig
    template_path: Path = Path("data/prompts/judge_prompt.txt")
    policy_doc_path: Optional[Path] = None
    retries: int = Field(default=1, ge=0)
    scale: TarlScale = TarlScale.CAPPED

    def _resolve(self, base: Path) -> None:
        for name in ("template_path", "policy_doc_path"):
            value = getattr(self, name)
            if value is not None and not value.is_absolute():
                setattr(self, name, base / value)

    def _check_paths(self, source: str) -> None:
        for name in ("template_path", "policy_doc_path"):
            value = getattr(self, name)
            if value is not None and not value.is_file():
                raise ConfigurationException(f"{name} does not exist: {value}", source)


def _read_json(path: Path) -> Any:
    if not path.is_file():
        raise ConfigurationException("file not found", str(path))
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationException(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(path)) from exc


def load_manifest(path: Path | str, model: Type[M]) -> M:
    """
    Parse, resolve and check a manifest file.

    Raises:
        ConfigurationException: Unreadable file, schema violation (naming the
            first offending field) or a referenced file that does not exist
    """
    target = Path(path)
    data = _read_json(target)
    try:
        manifest = model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise ConfigurationException(f"{where}: {first['msg']}", str(target)) from exc
    manifest._resolve(target.parent)
    manifest._check_paths(str(target))
    return manifest
