"""
Actor providers: fresh policy, user and tool executor per rollout.
"""

from typing import Callable

from src.application.ports.actors import (
    ActorProvider,
    EpisodeActors,
    PolicyClient,
    UserSimulatorFactory,
)
from src.domain.entities.retail import EntityStore
from src.domain.entities.task import TaskSpec
from src.domain.services.retail_env import snapshot
from src.domain.services.toolkit import ToolRegistry
from src.infrastructure.adapters.tool_executors import (
    HttpToolExecutor,
    HttpUserSimulator,
    LocalToolExecutor,
    SandboxWireClient,
    WireEpisode,
)

PolicyFactory = Callable[[TaskSpec, int], PolicyClient]


class LocalActorProvider(ActorProvider):
    """In-process episodes, each on its own snapshot of the seed store."""

    def __init__(
        self,
        registry: ToolRegistry,
        seed_store: EntityStore,
        users: UserSimulatorFactory,
        policies: PolicyFactory,
    ):
        self._registry = registry
        self._seed_store = seed_store
        self._users = users
        self._policies = policies

    async def actors_for(self, task: TaskSpec, rollout_index: int) -> EpisodeActors:
        return EpisodeActors(
            policy=self._policies(task, rollout_index),
            user=self._users.for_task(task),
            executor=LocalToolExecutor(self._registry, snapshot(self._seed_store)),
        )


class WireActorProvider(ActorProvider):
    """Episodes driven through a sandbox service session per rollout."""

    def __init__(self, client: SandboxWireClient, policies: PolicyFactory):
        self._client = client
        self._policies = policies

    async def actors_for(self, task: TaskSpec, rollout_index: int) -> EpisodeActors:
        episode = await WireEpisode.open(self._client, task.task_id)
        return EpisodeActors(
            policy=self._policies(task, rollout_index),
            user=HttpUserSimulator(episode),
            executor=HttpToolExecutor(episode),
        )
