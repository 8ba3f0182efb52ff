"""
Value Object for tool calls.

A ToolCall is the structured (name, arguments) action an agent emits. The
canonical key defined here is what the verifier and the intervention hook
compare: list arguments compare as multisets, paired item lists compare as a
multiset of positional (old, new) pairs, numbers compare after fixed
two-digit decimal normalization and strings after trimming.
"""

from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Any, Hashable

# Paired list arguments: item_ids[i] is exchanged for new_item_ids[i].
PAIRED_LIST_ARGUMENTS: tuple[tuple[str, str], ...] = (("item_ids", "new_item_ids"),)

CENT = Decimal("0.01")


def _canonical_scalar(value: Any) -> Hashable:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float, Decimal)):
        try:
            return str(Decimal(str(value)).quantize(CENT))
        except InvalidOperation:
            return str(value)
    if isinstance(value, str):
        return value.strip()
    if isinstance(value, dict):
        return tuple(sorted((str(k), _canonical_value(v)) for k, v in value.items()))
    return str(value)


def _canonical_value(value: Any) -> Hashable:
    if isinstance(value, (list, tuple)):
        items = [_canonical_value(v) for v in value]
        return ("multiset", tuple(sorted(items, key=repr)))
    return _canonical_scalar(value)


@dataclass(frozen=True)
class ToolCall:
    """A named tool invocation with JSON-compatible arguments."""

    name: str
    arguments: dict[str, Any] = field(default_factory=dict)

    def canonical_key(self) -> Hashable:
        """Hashable key used for multiset comparison of calls."""
        remaining = dict(self.arguments)
        parts: list[tuple[str, Hashable]] = []

        for left, right in PAIRED_LIST_ARGUMENTS:
            lhs, rhs = remaining.get(left), remaining.get(right)
            if isinstance(lhs, list) and isinstance(rhs, list) and len(lhs) == len(rhs):
                pairs = sorted(
                    ((_canonical_scalar(a), _canonical_scalar(b)) for a, b in zip(lhs, rhs)),
                    key=repr,
                )
                parts.append((f"{left}|{right}", ("pairs", tuple(pairs))))
                remaining.pop(left)
                remaining.pop(right)

        for key, value in remaining.items():
            parts.append((key, _canonical_value(value)))

        return (self.name.strip(), tuple(sorted(parts, key=lambda p: p[0])))

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "arguments": dict(self.arguments)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ToolCall":
        return cls(name=str(data["name"]), arguments=dict(data.get("arguments") or {}))


def call_multiset(calls: list[ToolCall]) -> Counter:
    """Multiset of canonical keys for a list of calls."""
    return Counter(call.canonical_key() for call in calls)
