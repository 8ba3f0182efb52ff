"""
Dependency Injection configuration.

Builds the sandbox service's object graph from Settings: seed store, tool
roster, task catalog, session store, user-simulator backend, trajectory log
and the use cases the controllers call.
"""

from typing import Optional

import structlog

from src.application.ports.actors import UserSimulatorFactory
from src.application.ports.repositories import SessionRepository, TaskRepository, TrajectoryRepository
from src.application.use_cases.sandbox import (
    CloseEpisodeUseCase,
    CreateEpisodeUseCase,
    GetEpisodeUseCase,
    InvokeToolUseCase,
    ListToolsUseCase,
    SessionLookup,
    UserStepUseCase,
)
from src.application.use_cases.trajectories import FetchTrajectoryUseCase, PersistTrajectoryUseCase
from src.config.settings import Settings, get_settings
from src.domain.entities.retail import EntityStore
from src.domain.exceptions import UnknownToolError
from src.domain.services.toolkit import ToolRegistry, build_retail_registry
from src.infrastructure.adapters.chat_client import ChatClientConfig, ChatCompletionClient
from src.infrastructure.adapters.llm_actors import LlmUserFactory
from src.infrastructure.adapters.scripted import ScriptedUserFactory
from src.infrastructure.exceptions import ConfigurationException
from src.infrastructure.persistence.memory_store import MemorySessionStore
from src.infrastructure.persistence.trajectory_log import JsonlTrajectoryLog
from src.infrastructure.repositories.memory_session_repository import MemorySessionRepository
from src.infrastructure.repositories.task_repository import InMemoryTaskRepository
from src.infrastructure.serialization.seed_file import load_seed_file
from src.infrastructure.serialization.task_codec import load_tasks

logger = structlog.get_logger(__name__)


class DependencyContainer:
    """
    Dependency container for the application.

    Components are created lazily on first access and cached until
    `reset()`. A single process-wide instance is shared through
    `get_container()`; tests swap its settings with `configure()`.
    """

    _instance: Optional["DependencyContainer"] = None

    def __new__(cls) -> "DependencyContainer":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, "_initialized"):
            self._settings: Optional[Settings] = None
            self._components: dict[str, object] = {}
            self._chat_clients: list[ChatCompletionClient] = []
            self._initialized = True

    def configure(self, settings: Settings) -> None:
        self.reset()
        self._settings = settings

    @property
    def settings(self) -> Settings:
        return self._settings or get_settings()

    def _cached(self, name: str, factory):
        if name not in self._components:
            self._components[name] = factory()
        return self._components[name]

    @property
    def seed_store(self) -> EntityStore:
        return self._cached("seed_store", lambda: load_seed_file(self.settings.seed_path))

    @property
    def tool_registry(self) -> ToolRegistry:
        def build() -> ToolRegistry:
            try:
                return build_retail_registry().filtered(self.settings.enabled_tools)
            except UnknownToolError as exc:
                raise ConfigurationException(f"enabled_tools: {exc.message}") from exc

        return self._cached("tool_registry", build)

    @property
    def task_repository(self) -> TaskRepository:
        return self._cached(
            "task_repository",
            lambda: InMemoryTaskRepository(m.to_domain() for m in load_tasks(self.settings.tasks_path)),
        )

    @property
    def memory_store(self) -> MemorySessionStore:
        return self._cached("memory_store", MemorySessionStore)

    @property
    def session_repository(self) -> SessionRepository:
        return self._cached("session_repository", lambda: MemorySessionRepository(self.memory_store))

    @property
    def session_lookup(self) -> SessionLookup:
        return self._cached(
            "session_lookup",
            lambda: SessionLookup(self.session_repository, self.settings.session_idle_timeout_seconds),
        )

    @property
    def trajectory_repository(self) -> TrajectoryRepository:
        return self._cached("trajectory_repository", lambda: JsonlTrajectoryLog(self.settings.trajectory_log_path))

    def _chat_client(self, endpoint: Optional[str], model: str, temperature: float, key_env: Optional[str]) -> ChatCompletionClient:
        s = self.settings
        config = ChatClientConfig(
            endpoint=endpoint,
            model=model,
            temperature=temperature,
            api_key_env=key_env,
            timeout_seconds=s.request_timeout_seconds,
            max_retries=s.request_max_retries,
            rate_limit_per_second=s.request_rate_limit_per_second,
        )
        client = ChatCompletionClient(config)
        self._chat_clients.append(client)
        return client

    @property
    def user_factory(self) -> UserSimulatorFactory:
        def build() -> UserSimulatorFactory:
            s = self.settings
            if s.user_simulator == "scripted":
                return ScriptedUserFactory()
            if not s.user_endpoint:
                raise ConfigurationException("user_simulator is 'llm' but user_endpoint is not set")
            return LlmUserFactory(self._chat_client(s.user_endpoint, s.user_model, s.user_temperature, s.user_api_key_env))

        return self._cached("user_factory", build)

    @property
    def create_episode_use_case(self) -> CreateEpisodeUseCase:
        return self._cached(
            "create_episode",
            lambda: CreateEpisodeUseCase(
                sessions=self.session_repository,
                tasks=self.task_repository,
                seed_store=self.seed_store,
                users=self.user_factory,
                lookup=self.session_lookup,
                max_turns=self.settings.max_turns,
            ),
        )

    @property
    def get_episode_use_case(self) -> GetEpisodeUseCase:
        return self._cached("get_episode", lambda: GetEpisodeUseCase(self.session_lookup))

    @property
    def close_episode_use_case(self) -> CloseEpisodeUseCase:
        return self._cached("close_episode", lambda: CloseEpisodeUseCase(self.session_repository, self.session_lookup))

    @property
    def list_tools_use_case(self) -> ListToolsUseCase:
        return self._cached("list_tools", lambda: ListToolsUseCase(self.tool_registry))

    @property
    def invoke_tool_use_case(self) -> InvokeToolUseCase:
        return self._cached("invoke_tool", lambda: InvokeToolUseCase(self.tool_registry, self.session_lookup))

    @property
    def user_step_use_case(self) -> UserStepUseCase:
        return self._cached("user_step", lambda: UserStepUseCase(self.session_lookup))

    @property
    def persist_trajectory_use_case(self) -> PersistTrajectoryUseCase:
        return self._cached("persist_trajectory", lambda: PersistTrajectoryUseCase(self.trajectory_repository))

    @property
    def fetch_trajectory_use_case(self) -> FetchTrajectoryUseCase:
        return self._cached("fetch_trajectory", lambda: FetchTrajectoryUseCase(self.trajectory_repository))

    def warm_up(self) -> None:
        """
        Load every file-backed component so configuration errors surface at startup.

        Raises:
            ConfigurationException: Bad seed, task file, tool roster or backend
        """
        store = self.seed_store
        registry = self.tool_registry
        _ = self.task_repository
        _ = self.user_factory
        logger.info("sandbox ready", tools=len(registry), users=len(store.users), orders=len(store.orders))

    async def health_check(self) -> dict[str, bool]:
        return {
            "session_store": await self.memory_store.health_check(),
            "trajectory_log": await self.trajectory_repository.health_check(),
            "tool_registry": len(self.tool_registry) > 0,
        }

    async def aclose(self) -> None:
        for client in self._chat_clients:
            await client.close()
        self._chat_clients.clear()

    def reset(self) -> None:
        """Drop every cached component (sessions included)."""
        self._components.clear()
        self._chat_clients.clear()
        self._settings = None


# Global container instance (Singleton)
container = DependencyContainer()


def get_container() -> DependencyContainer:
    return container
