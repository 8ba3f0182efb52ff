"""
Judge prompt rendering and strict parsing of judge verdicts.

Turns are labeled [Turn N] with N counted from 0, matching the score_N keys
the judge must return.
"""

import json
from typing import Any

import structlog

from src.domain.entities.task import GroundTruth
from src.domain.entities.trajectory import Trajectory
from src.domain.exceptions import AdjudicationError
from src.domain.services.react import strip_reasoning
from src.domain.value_objects.rewards import TurnScores

logger = structlog.get_logger(__name__)


def render_conversation(trajectory: Trajectory) -> str:
    blocks = []
    for turn in trajectory.turns:
        label = f"[Turn {turn.index - 1}]"
        feedback = turn.feedback.text if turn.feedback.text else "(no response)"
        blocks.append(f"{label}\nAgent: {turn.agent.text}\nEnvironment: {feedback}")
    return "\n\n".join(blocks)


def render_ground_truth(truth: GroundTruth) -> str:
    return json.dumps([call.to_dict() for call in truth.calls], indent=2, ensure_ascii=False)


def render_judge_prompt(
    template: str,
    trajectory: Trajectory,
    truth: GroundTruth,
    policy_doc: str,
    instruction: str,
) -> str:
    replacements = {
        "{policy}": policy_doc,
        "{instruction}": instruction,
        "{ground_truth}": render_ground_truth(truth),
        "{conversation}": render_conversation(trajectory),
    }
    prompt = template
    for marker, value in replacements.items():
        prompt = prompt.replace(marker, value)
    return prompt


def _last_score_object(text: str) -> dict[str, Any]:
    decoder = json.JSONDecoder()
    found: dict[str, Any] | None = None
    for position, char in enumerate(text):
        if char != "{":
            continue
        try:
            obj, _ = decoder.raw_decode(text, position)
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict) and any(str(k).startswith("score_") for k in obj):
            found = obj
    if found is None:
        raise AdjudicationError("no JSON object with score keys", text)
    return found


def _score_value(key: str, value: Any, raw: str) -> int:
    if isinstance(value, bool):
        raise AdjudicationError(f"{key}: value out of range ({value!r})", raw)
    if isinstance(value, str):
        try:
            value = int(value.strip())
        except ValueError:
            raise AdjudicationError(f"{key}: not an integer ({value!r})", raw) from None
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int) or value not in (-1, 0, 1):
        raise AdjudicationError(f"{key}: value out of range ({value!r})", raw)
    return value


def parse_turn_scores(raw: str, num_turns: int) -> TurnScores:
    """
    Parse and validate a judge verdict.

    Only the last score object outside reasoning blocks counts. A second -1
    is clamped to 0 (the earliest one is kept) and noted in the warnings.

    Raises:
        AdjudicationError: No score object, missing or extra keys, or a value
            outside {-1, 0, 1}
    """
    text = strip_reasoning(raw)
    data = _last_score_object(text)

    expected = [f"score_{i}" for i in range(num_turns)]
    missing = [key for key in expected if key not in data]
    if missing:
        raise AdjudicationError(f"missing keys {missing}", raw)
    extra = sorted(k for k in data if str(k).startswith("score_") and k not in expected)
    if extra:
        raise AdjudicationError(f"unexpected keys {extra}", raw)

    scores = [_score_value(key, data[key], raw) for key in expected]
    warnings: list[str] = []
    seen_major = False
    for i, score in enumerate(scores):
        if score != -1:
            continue
        if seen_major:
            scores[i] = 0
            warnings.append(f"score_{i}: duplicate -1 clamped to 0")
        seen_major = True
    if warnings:
        logger.warning("judge scores repaired", warnings=warnings)
    return TurnScores(scores=tuple(scores), warnings=tuple(warnings))
