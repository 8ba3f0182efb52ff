"""
Deterministic scripted user.

Every reply is recomputed from the conversation history, so identical
histories always give identical replies. Each script step answers at most
once; once every step is used and nothing matches, the user stops.
"""

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from src.domain.entities.task import ScriptStep, TaskSpec
from src.domain.entities.trajectory import STOP_TOKEN, Speaker, Utterance

DEFAULT_FALLBACK = "Sorry, I don't understand. Could you help me with my request?"


def trigger_matches(trigger: str, message: str) -> bool:
    """Case-insensitive substring match; a ``re:`` prefix selects a regex."""
    if trigger.startswith("re:"):
        return re.search(trigger[3:], message, re.IGNORECASE) is not None
    return trigger.lower() in message.lower()


@dataclass(frozen=True)
class ScriptedUser:
    instruction: str
    script: tuple[ScriptStep, ...] = ()
    fallback: Optional[str] = None
    opening: Optional[str] = None

    @classmethod
    def for_task(cls, task: TaskSpec) -> "ScriptedUser":
        return cls(
            instruction=task.user_instruction,
            script=tuple(task.user_script),
            fallback=task.user_fallback,
            opening=task.user_opening,
        )

    def first_message(self) -> str:
        return self.opening or self.instruction

    def _reply(self, message: str, used: set[int]) -> str:
        for position, step in enumerate(self.script):
            if position not in used and trigger_matches(step.trigger, message):
                used.add(position)
                return step.reply
        if len(used) == len(self.script):
            return STOP_TOKEN
        return self.fallback or DEFAULT_FALLBACK

    def next_message(self, history: Sequence[Utterance]) -> str:
        """Reply to the last agent message in `history`; the opening if there is none."""
        used: set[int] = set()
        reply = self.first_message()
        for utterance in history:
            if utterance.speaker == Speaker.AGENT:
                reply = self._reply(utterance.text, used)
        return reply
