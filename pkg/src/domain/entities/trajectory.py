"""
Trajectory entities.

A trajectory alternates agent segments and environment segments, one pair
per turn, for a single episode.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from src.domain.entities.tools import ToolResult
from src.domain.value_objects.rewards import RewardBreakdown, TurnScores, VerifyReport
from src.domain.value_objects.tool_call import ToolCall

STOP_TOKEN = "##STOP##"


class SegmentRole(str, Enum):
    AGENT = "agent"
    ENVIRONMENT = "environment"


class Modality(str, Enum):
    TEXT = "text"
    SPEECH_PLACEHOLDER = "speech_placeholder"


@dataclass(frozen=True)
class Segment:
    role: SegmentRole
    tokens: tuple[str, ...]
    text: str
    modality: Modality = Modality.TEXT
    audio_ref: Optional[str] = None

    def __post_init__(self) -> None:
        if self.role == SegmentRole.AGENT and self.modality != Modality.TEXT:
            raise ValueError("agent segments are always text")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class UserMessage:
    text: str


@dataclass(frozen=True)
class Stop:
    pass


@dataclass(frozen=True)
class InvalidAction:
    """Agent output whose action block could not be parsed."""

    raw: str
    error: str


Action = Union[ToolCall, UserMessage, Stop, InvalidAction]


@dataclass(frozen=True)
class Turn:
    """One agent reasoning + action and the environment's feedback."""

    index: int
    thought: str
    action: Action
    agent: Segment
    feedback: Segment
    tool_result: Optional[ToolResult] = None
    interventions: int = 0

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("turn index starts at 1")
        if self.agent.role != SegmentRole.AGENT or self.feedback.role != SegmentRole.ENVIRONMENT:
            raise ValueError("turn segments must be agent then environment")
        if isinstance(self.action, Stop) and self.feedback.tokens:
            raise ValueError("a Stop action has empty feedback")


class TrajectoryStatus(str, Enum):
    COMPLETED = "completed"
    MAX_TURNS = "max_turns"
    TRANSPORT_ERROR = "transport_error"


@dataclass
class Trajectory:
    """
    Full record of one episode.

    Optional per-token arrays (log-probs, reference log-probs, values,
    entropies) are supplied by an external trainer and are aligned with
    `tokens`.
    """

    task_id: str
    turns: list[Turn] = field(default_factory=list)
    prompt: str = ""
    status: TrajectoryStatus = TrajectoryStatus.COMPLETED
    terminal_reward: Optional[int] = None
    rollout_index: int = 0
    verify_report: Optional[VerifyReport] = None
    turn_scores: Optional[TurnScores] = None
    breakdown: Optional[RewardBreakdown] = None
    error: Optional[str] = None
    logprobs: Optional[list[float]] = None
    ref_logprobs: Optional[list[float]] = None
    values: Optional[list[float]] = None
    entropies: Optional[list[float]] = None

    def __post_init__(self) -> None:
        for position, turn in enumerate(self.turns, start=1):
            if turn.index != position:
                raise ValueError("turn indices must be contiguous from 1")

    @property
    def num_turns(self) -> int:
        return len(self.turns)

    @property
    def segments(self) -> list[Segment]:
        """Segments in order: agent, environment, agent, environment, ..."""
        stream: list[Segment] = []
        for turn in self.turns:
            stream.append(turn.agent)
            stream.append(turn.feedback)
        return stream

    @property
    def tokens(self) -> list[str]:
        return [tok for segment in self.segments for tok in segment.tokens]

    @property
    def token_roles(self) -> list[SegmentRole]:
        return [segment.role for segment in self.segments for _ in segment.tokens]

    @property
    def agent_token_count(self) -> int:
        return sum(len(turn.agent) for turn in self.turns)

    def turn_agent_spans(self) -> list[tuple[int, int]]:
        """Half-open [start, end) token positions of each turn's agent segment."""
        spans: list[tuple[int, int]] = []
        cursor = 0
        for turn in self.turns:
            start = cursor
            cursor += len(turn.agent)
            spans.append((start, cursor))
            cursor += len(turn.feedback)
        return spans

    @property
    def final_agent_messages(self) -> list[str]:
        return [t.action.text for t in self.turns if isinstance(t.action, UserMessage)]

    def __repr__(self) -> str:
        return (
            f"Trajectory(task_id='{self.task_id}', turns={len(self.turns)}, "
            f"status={self.status.value}, terminal_reward={self.terminal_reward})"
        )


@dataclass
class RolloutGroup:
    """G rollouts of one task with one scalar reward per trajectory."""

    trajectories: list[Trajectory]
    scalar_rewards: list

    def __post_init__(self) -> None:
        if len(self.trajectories) != len(self.scalar_rewards):
            raise ValueError("one scalar reward per trajectory")

    @property
    def size(self) -> int:
        return len(self.trajectories)

    def index_of(self, trajectory: Trajectory) -> Optional[int]:
        return next((i for i, t in enumerate(self.trajectories) if t is trajectory), None)


class Speaker(str, Enum):
    AGENT = "agent"
    USER = "user"


@dataclass(frozen=True)
class Utterance:
    """One user-visible conversation message (no reasoning, no tool traffic)."""

    speaker: Speaker
    text: str
