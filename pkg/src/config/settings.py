"""
Application configuration.

Handles environment variables, the optional JSON config file and the
defaults for the sandbox service and the operator commands.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.infrastructure.exceptions import ConfigurationException


class Settings(BaseSettings):
    """
    Main application configuration.

    Values come from environment variables (case-insensitive, `.env`
    supported) and may be overridden by a JSON config file. API keys are
    never stored here; only the name of the variable holding them is.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # API Configuration
    api_host: str = "0.0.0.0"
    api_port: int = Field(default=8000, ge=1, le=65535)
    debug_mode: bool = False

    # Deployment
    environment: str = "development"
    log_level: str = "INFO"
    log_json: bool = False

    # Sandbox
    seed_path: Path = Path("data/seed/retail_seed.json")
    tasks_path: Path = Path("data/tasks/retail_tasks.json")
    trajectory_log_path: Path = Path("var/trajectories.jsonl")
    policy_doc_path: Optional[Path] = None
    enabled_tools: Optional[list[str]] = None
    max_turns: int = Field(default=30, ge=1)
    session_idle_timeout_seconds: float = Field(default=3600.0, gt=0)

    # User simulator
    user_simulator: Literal["scripted", "llm"] = "scripted"
    user_endpoint: Optional[str] = None
    user_model: str = "gpt-4o"
    user_temperature: float = 0.0
    user_api_key_env: Optional[str] = "USER_SIM_API_KEY"

    # Judge
    judge_endpoint: Optional[str] = None
    judge_model: str = "gpt-4o"
    judge_temperature: float = 0.0
    judge_api_key_env: Optional[str] = "JUDGE_API_KEY"
    judge_prompt_path: Path = Path("data/prompts/judge_prompt.txt")

    # Chat client behaviour shared by user simulator and judge
    request_timeout_seconds: float = Field(default=60.0, gt=0)
    request_max_retries: int = Field(default=2, ge=0)
    request_rate_limit_per_second: Optional[float] = Field(default=None, gt=0)

    @property
    def is_development(self) -> bool:
        return self.environment.lower() == "development"

    @property
    def is_production(self) -> bool:
        return self.environment.lower() == "production"

    @classmethod
    def from_file(cls, path: Path | str, **overrides: Any) -> "Settings":
        """
        Build settings from a JSON config file on top of the environment.

        Raises:
            ConfigurationException: Missing file, invalid JSON or invalid values
        """
        target = Path(path)
        try:
            values = json.loads(target.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationException("config file not found", str(target)) from None
        except json.JSONDecodeError as exc:
            raise ConfigurationException(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(target)) from exc
        if not isinstance(values, dict):
            raise ConfigurationException("config file must hold a JSON object", str(target))
        values.update(overrides)
        try:
            return cls(**values)
        except ValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise ConfigurationException(f"{where}: {first['msg']}", str(target)) from exc

    def get_uvicorn_config(self) -> dict[str, Any]:
        return {
            "host": self.api_host,
            "port": self.api_port,
            "log_level": self.log_level.lower(),
            "access_log": self.debug_mode,
        }


# Global configuration instance
settings = Settings()


def get_settings() -> Settings:
    return settings
