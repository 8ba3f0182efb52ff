"""
Ports for the external actors an episode talks to.

The trained policy, the user simulator, the judge and the tool sandbox all
live behind these interfaces so that scripted test doubles, chat-endpoint
clients and wire clients are interchangeable.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

from src.domain.entities.task import GroundTruth, TaskSpec
from src.domain.entities.tools import ToolResult, ToolSpec
from src.domain.entities.trajectory import Trajectory, Utterance
from src.domain.value_objects.rewards import TurnScores
from src.domain.value_objects.tool_call import ToolCall

ChatMessages = list[dict[str, str]]


@dataclass(frozen=True)
class PolicyOutput:
    """Agent text plus optional per-token log-probabilities and entropies."""

    text: str
    logprobs: Optional[list[float]] = None
    entropies: Optional[list[float]] = None


class PolicyClient(ABC):
    @abstractmethod
    async def complete(self, messages: ChatMessages, reasoning_prefix: Optional[str] = None) -> PolicyOutput:
        """
        Produce the next agent output.

        Args:
            messages: Conversation so far in chat format
            reasoning_prefix: Text the agent's reasoning must start with; the
                returned text continues it

        Raises:
            TransportError: Backend unreachable after retries
        """


class UserSimulator(ABC):
    @abstractmethod
    async def first_message(self) -> str:
        """Opening message of the conversation."""

    @abstractmethod
    async def next_message(self, history: Sequence[Utterance]) -> str:
        """
        Reply to the last agent message; "##STOP##" ends the episode.

        Raises:
            TransportError: Backend unreachable after retries
        """


class TurnJudge(ABC):
    @abstractmethod
    async def adjudicate(self, trajectory: Trajectory, truth: GroundTruth, instruction: str) -> TurnScores:
        """
        Score every turn in {-1, 0, 1}.

        Raises:
            AdjudicationError: Malformed verdict
            TransportError: Backend unreachable after retries
        """


class ToolExecutor(ABC):
    """Executes tool calls against one episode's isolated store."""

    @abstractmethod
    async def list_tools(self) -> list[ToolSpec]:
        pass

    @abstractmethod
    async def execute(self, call: ToolCall) -> ToolResult:
        """Tool-level failures come back as error results, never as exceptions."""

    async def close(self) -> None:
        return None


@dataclass
class EpisodeActors:
    policy: PolicyClient
    user: UserSimulator
    executor: ToolExecutor


class ActorProvider(ABC):
    """Builds fresh actors (and a fresh store snapshot) for every episode."""

    @abstractmethod
    async def actors_for(self, task: TaskSpec, rollout_index: int) -> EpisodeActors:
        pass


class UserSimulatorFactory(ABC):
    @abstractmethod
    def for_task(self, task: TaskSpec) -> UserSimulator:
        pass
