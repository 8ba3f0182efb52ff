"""
Unit tests for settings, operator manifests and the dependency container.
"""

import json

import pytest

from src.config.settings import Settings
from src.infrastructure.config.dependency_injection import DependencyContainer
from src.infrastructure.exceptions import ConfigurationException
from src.interfaces.cli.manifest import EpisodeSettings, JudgeManifest, RunManifest, load_manifest
from tests.conftest import JUDGE_PROMPT_PATH, SEED_PATH, TASKS_PATH


def _write(path, document) -> str:
    path.write_text(json.dumps(document) if not isinstance(document, str) else document, encoding="utf-8")
    return str(path)


class TestSettingsFile:
    def test_values_from_file(self, tmp_path):
        path = _write(tmp_path / "sandbox.json", {"api_port": 9100, "max_turns": 12, "enabled_tools": ["calculate_refund"]})

        settings = Settings.from_file(path, api_host="127.0.0.1")

        assert settings.api_port == 9100
        assert settings.max_turns == 12
        assert settings.enabled_tools == ["calculate_refund"]
        assert settings.get_uvicorn_config()["host"] == "127.0.0.1"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationException) as exc_info:
            Settings.from_file(tmp_path / "absent.json")

        assert exc_info.value.path.endswith("absent.json")

    def test_invalid_json(self, tmp_path):
        with pytest.raises(ConfigurationException) as exc_info:
            Settings.from_file(_write(tmp_path / "sandbox.json", "{\n  'port': 1\n}"))

        assert "line 2" in exc_info.value.message

    def test_non_object(self, tmp_path):
        with pytest.raises(ConfigurationException):
            Settings.from_file(_write(tmp_path / "sandbox.json", [1, 2]))

    def test_invalid_value_names_the_field(self, tmp_path):
        with pytest.raises(ConfigurationException) as exc_info:
            Settings.from_file(_write(tmp_path / "sandbox.json", {"max_turns": 0}))

        assert "max_turns" in exc_info.value.message


class TestManifests:
    """Tests for run and judge manifests."""

    def test_relative_paths_resolve_against_the_manifest(self, tmp_path):
        # Arrange
        (tmp_path / "tasks.json").write_text(TASKS_PATH.read_text(encoding="utf-8"), encoding="utf-8")
        path = _write(
            tmp_path / "run.json",
            {
                "tasks_path": "tasks.json",
                "seed_path": str(SEED_PATH),
                "output_path": "out/trajectories.jsonl",
                "episode": {"num_rollout": 2, "intervention_enabled": True},
            },
        )

        # Act
        manifest = load_manifest(path, RunManifest)

        # Assert
        assert manifest.tasks_path == tmp_path / "tasks.json"
        assert manifest.seed_path == SEED_PATH
        assert manifest.output_path == tmp_path / "out" / "trajectories.jsonl"
        assert manifest.policy.backend == "scripted"
        assert manifest.episode.num_rollout == 2

    def test_referenced_file_must_exist(self, tmp_path):
        path = _write(
            tmp_path / "run.json",
            {"tasks_path": "missing.json", "seed_path": str(SEED_PATH), "output_path": "out.jsonl"},
        )

        with pytest.raises(ConfigurationException) as exc_info:
            load_manifest(path, RunManifest)

        assert "tasks_path" in exc_info.value.message

    def test_schema_error_names_the_field(self, tmp_path):
        path = _write(
            tmp_path / "run.json",
            {
                "tasks_path": str(TASKS_PATH),
                "seed_path": str(SEED_PATH),
                "output_path": "out.jsonl",
                "episode": {"max_turns": 0},
            },
        )

        with pytest.raises(ConfigurationException) as exc_info:
            load_manifest(path, RunManifest)

        assert "episode.max_turns" in exc_info.value.message

    def test_chat_backend_needs_client_config(self, tmp_path):
        path = _write(
            tmp_path / "run.json",
            {
                "tasks_path": str(TASKS_PATH),
                "seed_path": str(SEED_PATH),
                "output_path": "out.jsonl",
                "policy": {"backend": "chat"},
            },
        )

        with pytest.raises(ConfigurationException):
            load_manifest(path, RunManifest)

    def test_judge_manifest(self, tmp_path):
        path = _write(
            tmp_path / "judge.json",
            {
                "chat": {"endpoint": "http://judge.test/v1/chat/completions", "model": "judge"},
                "template_path": str(JUDGE_PROMPT_PATH),
                "scale": "literal",
            },
        )

        manifest = load_manifest(path, JudgeManifest)

        assert manifest.retries == 1
        assert manifest.scale.value == "literal"

    def test_episode_settings_override_rollouts(self):
        config = EpisodeSettings(intervention_enabled=True).to_config(num_rollout=8)

        assert config.num_rollout == 8
        assert config.intervention_enabled is True
        assert config.intervention_limit == 2


class TestDependencyContainer:
    """Tests for the container's wiring and startup checks."""

    @pytest.mark.asyncio
    async def test_components_are_cached(self, test_container):
        assert test_container.create_episode_use_case is test_container.create_episode_use_case
        assert len(test_container.tool_registry) == 11

        health = await test_container.health_check()

        assert health == {"session_store": True, "trajectory_log": True, "tool_registry": True}

    def test_container_is_shared(self):
        assert DependencyContainer() is DependencyContainer()

    @pytest.mark.asyncio
    async def test_unknown_tool_in_roster(self, test_container, test_settings):
        test_container.configure(test_settings.model_copy(update={"enabled_tools": ["teleport_order"]}))

        with pytest.raises(ConfigurationException):
            test_container.warm_up()

    @pytest.mark.asyncio
    async def test_llm_user_needs_endpoint(self, test_container, test_settings):
        test_container.configure(test_settings.model_copy(update={"user_simulator": "llm"}))

        with pytest.raises(ConfigurationException):
            test_container.warm_up()

    @pytest.mark.asyncio
    async def test_app_logs_with_the_configured_settings(self, test_container, test_settings, monkeypatch):
        from src.interfaces import main as service

        calls = []
        monkeypatch.setattr(service, "configure_logging", lambda level, json_output: calls.append((level, json_output)))
        test_container.configure(test_settings.model_copy(update={"log_level": "DEBUG", "log_json": True}))

        service.create_app()

        assert calls == [("DEBUG", True)]

    @pytest.mark.asyncio
    async def test_roster_filters_tools(self, test_container, test_settings):
        test_container.configure(
            test_settings.model_copy(update={"enabled_tools": ["get_order_details", "calculate_refund"]})
        )

        assert len(test_container.list_tools_use_case.execute()) == 2
