"""
ReACT surface format.

Agent output is an optional ``<think>...</think>`` reasoning block followed by
either one ``<tool_call>{"name": ..., "arguments": {...}}</tool_call>`` block
or a plain reply addressed to the user. A reply equal to ``##STOP##`` is a
Stop action.
"""

import json
from dataclasses import dataclass
from typing import Union

from src.domain.entities.trajectory import STOP_TOKEN, Stop, UserMessage
from src.domain.exceptions import PreconditionViolation, ReactParseError
from src.domain.value_objects.tool_call import ToolCall

THINK_OPEN, THINK_CLOSE = "<think>", "</think>"
CALL_OPEN, CALL_CLOSE = "<tool_call>", "</tool_call>"

ParsedAction = Union[ToolCall, UserMessage, Stop]


@dataclass(frozen=True)
class ParsedReact:
    thought: str
    action: ParsedAction


def _think_block(text: str) -> tuple[str, int, int]:
    """Return (thought, start, end) of the reasoning block; (``""``, 0, 0) if absent."""
    start = text.find(THINK_OPEN)
    if start < 0:
        if THINK_CLOSE in text:
            pos = text.find(THINK_CLOSE)
            raise ReactParseError("closing </think> without opening tag", (pos, pos + len(THINK_CLOSE)))
        return "", 0, 0
    close = text.find(THINK_CLOSE, start)
    if close < 0:
        raise ReactParseError("unterminated <think> block", (start, len(text)), text[start:])
    end = close + len(THINK_CLOSE)
    return text[start + len(THINK_OPEN):close].strip(), start, end


def _tool_call(text: str, start: int) -> ToolCall:
    body_start = start + len(CALL_OPEN)
    close = text.find(CALL_CLOSE, body_start)
    if close < 0:
        raise ReactParseError("unterminated <tool_call> block", (start, len(text)), text[start:])
    if text.find(CALL_OPEN, close) >= 0:
        nxt = text.find(CALL_OPEN, close)
        raise ReactParseError("more than one tool call in a turn", (nxt, len(text)), text[nxt:])

    body = text[body_start:close]
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        pos = body_start + exc.pos
        raise ReactParseError(f"invalid JSON in tool call: {exc.msg}", (pos, close), body) from exc

    span = (start, close + len(CALL_CLOSE))
    if not isinstance(data, dict):
        raise ReactParseError("tool call must be a JSON object", span, body)
    name = data.get("name")
    arguments = data.get("arguments", {})
    if not isinstance(name, str) or not name.strip():
        raise ReactParseError("tool call needs a string 'name'", span, body)
    if not isinstance(arguments, dict):
        raise ReactParseError("tool call 'arguments' must be an object", span, body)
    return ToolCall(name=name.strip(), arguments=arguments)


def parse_react(agent_text: str) -> ParsedReact:
    """
    Split agent text into its thought and action.

    Raises:
        PreconditionViolation: Empty agent text
        ReactParseError: Malformed reasoning or action block; carries the span
    """
    if not agent_text or not agent_text.strip():
        raise PreconditionViolation("agent text must be non-empty")

    thought, t_start, t_end = _think_block(agent_text)

    call_start = agent_text.find(CALL_OPEN)
    if t_start <= call_start < t_end:
        call_start = agent_text.find(CALL_OPEN, t_end)
    if call_start >= 0:
        return ParsedReact(thought, _tool_call(agent_text, call_start))
    if CALL_CLOSE in agent_text[t_end:]:
        pos = agent_text.find(CALL_CLOSE, t_end)
        raise ReactParseError("closing </tool_call> without opening tag", (pos, pos + len(CALL_CLOSE)))

    reply = (agent_text[:t_start] + agent_text[t_end:]).strip()
    if not reply:
        raise ReactParseError("no action after reasoning block", (t_end, len(agent_text)))
    if reply == STOP_TOKEN:
        return ParsedReact(thought, Stop())
    return ParsedReact(thought, UserMessage(reply))


def format_react(thought: str, action: ParsedAction) -> str:
    """Render a thought and action in the surface format parse_react reads."""
    head = f"{THINK_OPEN}{thought}{THINK_CLOSE}\n" if thought else ""
    if isinstance(action, ToolCall):
        payload = json.dumps({"name": action.name, "arguments": action.arguments}, ensure_ascii=False)
        return f"{head}{CALL_OPEN}{payload}{CALL_CLOSE}"
    if isinstance(action, Stop):
        return f"{head}{STOP_TOKEN}"
    return f"{head}{action.text}"


def strip_reasoning(text: str) -> str:
    """Drop every reasoning block; used when showing agent text to other actors."""
    out = text
    while True:
        start = out.find(THINK_OPEN)
        if start < 0:
            return out.strip()
        close = out.find(THINK_CLOSE, start)
        if close < 0:
            return out[:start].strip()
        out = out[:start] + out[close + len(THINK_CLOSE):]


def with_reasoning_prefix(agent_text: str, prefix: str) -> str:
    """Prepend `prefix` to the reasoning block, opening one if the text has none."""
    stripped = agent_text.lstrip()
    if stripped.startswith(THINK_OPEN):
        rest = stripped[len(THINK_OPEN):].lstrip()
        return f"{THINK_OPEN}{prefix} {rest}"
    return f"{THINK_OPEN}{prefix}{THINK_CLOSE}\n{agent_text}"
