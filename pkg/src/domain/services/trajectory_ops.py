"""
Trajectory construction helpers, loss masking and statistics.
"""

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from src.domain.entities.trajectory import Modality, Segment, SegmentRole, Trajectory
from src.domain.exceptions import PreconditionViolation
from src.domain.services.tokenizer import DEFAULT_TOKENIZER, Tokenizer, speech_placeholders

LossMask = npt.NDArray[np.bool_]

WAIT_PATTERN = re.compile(r"\bwait\b", re.IGNORECASE)


@dataclass(frozen=True)
class TrajectoryStats:
    wait_count: int
    avg_agent_len: float
    num_turns: int
    agent_tokens: int

    def to_dict(self) -> dict:
        return {
            "wait_count": self.wait_count,
            "avg_agent_len": self.avg_agent_len,
            "num_turns": self.num_turns,
            "agent_tokens": self.agent_tokens,
        }


def agent_segment(text: str, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> Segment:
    return Segment(role=SegmentRole.AGENT, tokens=tuple(tokenizer.tokenize(text)), text=text)


def environment_segment(
    text: str,
    tokenizer: Tokenizer = DEFAULT_TOKENIZER,
    speech: bool = False,
    audio_ref: Optional[str] = None,
) -> Segment:
    """Environment feedback; speech feedback is carried as placeholder tokens."""
    if speech:
        return Segment(
            role=SegmentRole.ENVIRONMENT,
            tokens=tuple(speech_placeholders(text, tokenizer)),
            text=text,
            modality=Modality.SPEECH_PLACEHOLDER,
            audio_ref=audio_ref,
        )
    return Segment(role=SegmentRole.ENVIRONMENT, tokens=tuple(tokenizer.tokenize(text)), text=text)


def build_loss_mask(trajectory: Trajectory) -> LossMask:
    """Per-token mask, true exactly on agent-generated tokens."""
    return np.array([role == SegmentRole.AGENT for role in trajectory.token_roles], dtype=bool)


def count_waits(text: str) -> int:
    return len(WAIT_PATTERN.findall(text))


def stats(trajectory: Trajectory) -> TrajectoryStats:
    """
    Self-reflection and verbosity statistics.

    wait_count counts the standalone word "wait" (any case) in agent
    thoughts only; tool results and user replies are not scanned.
    """
    if trajectory.num_turns == 0:
        raise PreconditionViolation("stats need a trajectory with at least one turn")
    waits = sum(count_waits(turn.thought) for turn in trajectory.turns)
    agent_tokens = trajectory.agent_token_count
    return TrajectoryStats(
        wait_count=waits,
        avg_agent_len=agent_tokens / trajectory.num_turns,
        num_turns=trajectory.num_turns,
        agent_tokens=agent_tokens,
    )
