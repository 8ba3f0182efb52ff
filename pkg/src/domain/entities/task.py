"""
Task entities: the unit of training and evaluation.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from src.domain.value_objects.tool_call import ToolCall


class DomainTag(str, Enum):
    RETAIL_TEXT = "retail_text"
    RETAIL_SPEECH = "retail_speech"
    MATH = "math"

    @property
    def is_retail(self) -> bool:
        return self in (DomainTag.RETAIL_TEXT, DomainTag.RETAIL_SPEECH)


@dataclass(frozen=True)
class ScriptStep:
    """Scripted-user rule: reply when `trigger` occurs in the last agent message."""

    trigger: str
    reply: str


@dataclass(frozen=True)
class GroundTruth:
    """Expected write calls and, optionally, expected output strings."""

    calls: tuple[ToolCall, ...] = ()
    expected_outputs: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class TaskSpec:
    """
    A user instruction with its ground truth.

    Retail tasks carry write-only ground-truth calls; math tasks carry an
    integer expected answer instead.
    """

    task_id: str
    user_instruction: str
    domain_tag: DomainTag = DomainTag.RETAIL_TEXT
    ground_truth_calls: tuple[ToolCall, ...] = ()
    seed_ref: str = "retail"
    expected_answer: Optional[int] = None
    expected_outputs: Optional[tuple[str, ...]] = None
    user_script: tuple[ScriptStep, ...] = field(default_factory=tuple)
    user_opening: Optional[str] = None
    user_fallback: Optional[str] = None

    def __post_init__(self) -> None:
        if self.domain_tag == DomainTag.MATH and self.expected_answer is None:
            raise ValueError(f"math task {self.task_id} needs an expected_answer")

    @property
    def ground_truth(self) -> GroundTruth:
        return GroundTruth(calls=self.ground_truth_calls, expected_outputs=self.expected_outputs)
