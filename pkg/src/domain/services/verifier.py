"""
Rule-based terminal verifier.

The terminal reward is 1 iff the multiset of successful write calls equals
the ground-truth calls under canonical comparison. Call order across the
trajectory is free; argument canonicalization lives on ToolCall.
"""

import re
from collections import Counter
from decimal import Decimal, InvalidOperation
from typing import Hashable, Optional, Sequence

import structlog

from src.domain.entities.task import GroundTruth
from src.domain.entities.trajectory import Trajectory
from src.domain.value_objects.rewards import Mismatch, VerifyReport
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)

_BOXED = re.compile(r"\\boxed\{([^{}]*)\}")
_NUMBER = re.compile(r"-?\d{1,3}(?:,\d{3})+(?:\.\d+)?|-?\d+(?:\.\d+)?")


def extract_writes(trajectory: Trajectory) -> list[ToolCall]:
    """Successful mutating calls in execution order."""
    writes: list[ToolCall] = []
    for turn in trajectory.turns:
        result = turn.tool_result
        if isinstance(turn.action, ToolCall) and result is not None and result.ok and result.mutated:
            writes.append(turn.action)
    return writes


def verify(writes: Sequence[ToolCall], truth: GroundTruth) -> VerifyReport:
    """
    Compare successful writes with the ground truth as multisets.

    When several mismatch classes apply, wrong_args wins over
    unnecessary_write, which wins over missing_write.
    """
    by_key: dict[Hashable, ToolCall] = {}
    for call in list(writes) + list(truth.calls):
        by_key.setdefault(call.canonical_key(), call)

    written = Counter(call.canonical_key() for call in writes)
    expected = Counter(call.canonical_key() for call in truth.calls)
    extra = written - expected
    missing = expected - written

    if not extra and not missing:
        return VerifyReport(reward=1, mismatch=Mismatch.MATCH)

    details = [
        {"kind": "unexpected", "call": by_key[key].to_dict(), "count": count}
        for key, count in extra.items()
    ] + [
        {"kind": "missing", "call": by_key[key].to_dict(), "count": count}
        for key, count in missing.items()
    ]

    extra_names = {by_key[key].name for key in extra}
    missing_names = {by_key[key].name for key in missing}
    if extra_names & missing_names:
        mismatch = Mismatch.WRONG_ARGS
    elif extra:
        mismatch = Mismatch.UNNECESSARY_WRITE
    else:
        mismatch = Mismatch.MISSING_WRITE
    return VerifyReport(reward=0, mismatch=mismatch, details=tuple(details))


def output_check(final_agent_messages: Sequence[str], expected_outputs: Sequence[str]) -> bool:
    """True iff every expected string occurs (case-insensitive) in the agent's messages."""
    haystack = "\n".join(final_agent_messages).lower()
    return all(expected.lower() in haystack for expected in expected_outputs)


def verify_trajectory(
    trajectory: Trajectory,
    truth: GroundTruth,
    check_outputs: bool = False,
) -> VerifyReport:
    """
    Verify a finished trajectory.

    With `check_outputs`, a failing output check zeroes the reward while the
    mismatch class still describes the write comparison.
    """
    report = verify(extract_writes(trajectory), truth)
    if not check_outputs or truth.expected_outputs is None:
        return report

    passed = output_check(trajectory.final_agent_messages, truth.expected_outputs)
    reward = report.reward if passed else 0
    logger.debug("output check", task_id=trajectory.task_id, passed=passed)
    return VerifyReport(reward=reward, mismatch=report.mismatch, details=report.details, output_check=passed)


def extract_integer(answer_text: str) -> Optional[int]:
    """The final integer answer; a \\boxed{} answer takes precedence."""
    boxed = _BOXED.findall(answer_text)
    candidates = _NUMBER.findall(boxed[-1]) if boxed else []
    if not candidates:
        candidates = _NUMBER.findall(answer_text)
    if not candidates:
        return None
    try:
        value = Decimal(candidates[-1].replace(",", ""))
    except InvalidOperation:
        return None
    if value != value.to_integral_value():
        return None
    return int(value)


def verify_math(answer_text: str, expected_integer: int) -> int:
    return 1 if extract_integer(answer_text) == expected_integer else 0
