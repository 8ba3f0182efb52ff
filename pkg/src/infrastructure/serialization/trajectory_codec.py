"""
Line-delimited trajectory records.

One JSON object per line with stable field names (see docs/record_format.md).
Derived statistics are written for readers but ignored when decoding.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.domain.entities.tools import ToolResult
from src.domain.entities.trajectory import (
    InvalidAction,
    Modality,
    Segment,
    SegmentRole,
    Stop,
    Trajectory,
    TrajectoryStatus,
    Turn,
    UserMessage,
)
from src.domain.exceptions import PreconditionViolation, TrajectoryDecodeError
from src.domain.services.trajectory_ops import stats
from src.domain.value_objects.rewards import RewardBreakdown, TurnScores, VerifyReport
from src.domain.value_objects.tool_call import ToolCall

RECORD_VERSION = 1


class _Record(BaseModel):
    model_config = ConfigDict(extra="ignore")


class SegmentRecord(_Record):
    role: SegmentRole
    modality: Modality = Modality.TEXT
    tokens: list[str]
    text: str
    audio_ref: Optional[str] = None


class ToolCallAction(_Record):
    type: Literal["tool_call"]
    name: str
    arguments: dict[str, Any]


class UserMessageAction(_Record):
    type: Literal["user_message"]
    text: str


class StopAction(_Record):
    type: Literal["stop"]


class InvalidActionRecord(_Record):
    type: Literal["invalid"]
    raw: str
    error: str


ActionRecord = Union[ToolCallAction, UserMessageAction, StopAction, InvalidActionRecord]


class ToolResultRecord(_Record):
    status: Literal["ok", "error"]
    payload: Any = None
    mutated: bool = False
    error_code: Optional[str] = None
    error_message: Optional[str] = None


class TurnRecord(_Record):
    index: int = Field(ge=1)
    thought: str
    action: ActionRecord = Field(discriminator="type")
    agent: SegmentRecord
    feedback: SegmentRecord
    tool_result: Optional[ToolResultRecord] = None
    interventions: int = 0


class TurnScoresRecord(_Record):
    scores: list[int]
    warnings: list[str] = Field(default_factory=list)


class TrajectoryRecord(_Record):
    record_version: int = RECORD_VERSION
    task_id: str
    rollout_index: int = 0
    status: TrajectoryStatus = TrajectoryStatus.COMPLETED
    prompt: str = ""
    terminal_reward: Optional[int] = None
    error: Optional[str] = None
    turns: list[TurnRecord]
    verify_report: Optional[dict[str, Any]] = None
    turn_scores: Optional[TurnScoresRecord] = None
    breakdown: Optional[dict[str, Any]] = None
    logprobs: Optional[list[float]] = None
    ref_logprobs: Optional[list[float]] = None
    values: Optional[list[float]] = None
    entropies: Optional[list[float]] = None
    stats: Optional[dict[str, Any]] = None


def _segment_data(segment: Segment) -> dict[str, Any]:
    return {
        "role": segment.role.value,
        "modality": segment.modality.value,
        "tokens": list(segment.tokens),
        "text": segment.text,
        "audio_ref": segment.audio_ref,
    }


def _action_data(action) -> dict[str, Any]:
    if isinstance(action, ToolCall):
        return {"type": "tool_call", "name": action.name, "arguments": action.arguments}
    if isinstance(action, UserMessage):
        return {"type": "user_message", "text": action.text}
    if isinstance(action, Stop):
        return {"type": "stop"}
    return {"type": "invalid", "raw": action.raw, "error": action.error}


def to_record(trajectory: Trajectory) -> dict[str, Any]:
    """Plain-JSON record of a trajectory, field order fixed."""
    summary: Optional[dict[str, Any]] = None
    try:
        summary = stats(trajectory).to_dict()
    except PreconditionViolation:
        summary = None
    return {
        "record_version": RECORD_VERSION,
        "task_id": trajectory.task_id,
        "rollout_index": trajectory.rollout_index,
        "status": trajectory.status.value,
        "prompt": trajectory.prompt,
        "terminal_reward": trajectory.terminal_reward,
        "error": trajectory.error,
        "turns": [
            {
                "index": turn.index,
                "thought": turn.thought,
                "action": _action_data(turn.action),
                "agent": _segment_data(turn.agent),
                "feedback": _segment_data(turn.feedback),
                "tool_result": turn.tool_result.to_dict() if turn.tool_result else None,
                "interventions": turn.interventions,
            }
            for turn in trajectory.turns
        ],
        "verify_report": trajectory.verify_report.to_dict() if trajectory.verify_report else None,
        "turn_scores": (
            {"scores": list(trajectory.turn_scores.scores), "warnings": list(trajectory.turn_scores.warnings)}
            if trajectory.turn_scores
            else None
        ),
        "breakdown": trajectory.breakdown.to_dict() if trajectory.breakdown else None,
        "logprobs": trajectory.logprobs,
        "ref_logprobs": trajectory.ref_logprobs,
        "values": trajectory.values,
        "entropies": trajectory.entropies,
        "stats": summary,
    }


def serialize(trajectory: Trajectory) -> str:
    """One record line, without the trailing newline."""
    return json.dumps(to_record(trajectory), ensure_ascii=False, separators=(",", ":"))


def _segment(record: SegmentRecord) -> Segment:
    return Segment(
        role=record.role,
        tokens=tuple(record.tokens),
        text=record.text,
        modality=record.modality,
        audio_ref=record.audio_ref,
    )


def _action(record: ActionRecord):
    if isinstance(record, ToolCallAction):
        return ToolCall(name=record.name, arguments=record.arguments)
    if isinstance(record, UserMessageAction):
        return UserMessage(record.text)
    if isinstance(record, StopAction):
        return Stop()
    return InvalidAction(raw=record.raw, error=record.error)


def from_record(record: TrajectoryRecord) -> Trajectory:
    turns = [
        Turn(
            index=t.index,
            thought=t.thought,
            action=_action(t.action),
            agent=_segment(t.agent),
            feedback=_segment(t.feedback),
            tool_result=ToolResult.from_dict(t.tool_result.model_dump()) if t.tool_result else None,
            interventions=t.interventions,
        )
        for t in record.turns
    ]
    return Trajectory(
        task_id=record.task_id,
        turns=turns,
        prompt=record.prompt,
        status=record.status,
        terminal_reward=record.terminal_reward,
        rollout_index=record.rollout_index,
        verify_report=VerifyReport.from_dict(record.verify_report) if record.verify_report else None,
        turn_scores=(
            TurnScores(scores=tuple(record.turn_scores.scores), warnings=tuple(record.turn_scores.warnings))
            if record.turn_scores
            else None
        ),
        breakdown=RewardBreakdown.from_dict(record.breakdown) if record.breakdown else None,
        error=record.error,
        logprobs=record.logprobs,
        ref_logprobs=record.ref_logprobs,
        values=record.values,
        entropies=record.entropies,
    )


def deserialize(line: str, line_number: int = 1) -> Trajectory:
    """
    Decode one record line.

    Raises:
        TrajectoryDecodeError: With the line number and, for JSON syntax
            errors, the byte offset within the line
    """
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        offset = len(line[: exc.pos].encode("utf-8"))
        raise TrajectoryDecodeError(line_number, exc.msg, offset) from exc
    if not isinstance(data, dict):
        raise TrajectoryDecodeError(line_number, "record must be a JSON object", 0)
    try:
        record = TrajectoryRecord.model_validate(data)
        return from_record(record)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = ".".join(str(p) for p in first["loc"])
        raise TrajectoryDecodeError(line_number, f"{path}: {first['msg']}") from exc
    except (ValueError, KeyError) as exc:
        raise TrajectoryDecodeError(line_number, str(exc)) from exc


def iter_lines(text: str) -> Iterator[Trajectory]:
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield deserialize(line, number)


def read_trajectories(path: Path | str) -> list[Trajectory]:
    return list(iter_lines(Path(path).read_text(encoding="utf-8")))


def dumps(trajectories: Iterable[Trajectory]) -> str:
    return "".join(serialize(t) + "\n" for t in trajectories)


def write_atomic(path: Path | str, content: str) -> None:
    """Write via a temp file in the target directory, then rename over the target."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def write_trajectories(path: Path | str, trajectories: Iterable[Trajectory]) -> None:
    write_atomic(path, dumps(trajectories))
