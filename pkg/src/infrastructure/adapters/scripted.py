"""
Scripted actors: deterministic stand-ins for the policy and the user.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from src.application.ports.actors import (
    ChatMessages,
    PolicyClient,
    PolicyOutput,
    UserSimulator,
    UserSimulatorFactory,
)
from src.domain.entities.task import TaskSpec
from src.domain.entities.trajectory import STOP_TOKEN, Utterance
from src.domain.services.scripted_user import ScriptedUser


@dataclass(frozen=True)
class PolicyCall:
    messages: ChatMessages
    reasoning_prefix: Optional[str]


class ScriptedPolicy(PolicyClient):
    """
    Replays a fixed list of agent texts, one per query.

    Every prompt and reasoning prefix received is recorded in `calls`. Once
    the script runs out the policy stops, or repeats its last text when
    `repeat_last` is set.
    """

    def __init__(self, outputs: Sequence[str], repeat_last: bool = False):
        self._outputs = list(outputs)
        self._repeat_last = repeat_last
        self._position = 0
        self.calls: list[PolicyCall] = []

    @property
    def remaining(self) -> int:
        return max(0, len(self._outputs) - self._position)

    @property
    def prefixes(self) -> list[Optional[str]]:
        return [call.reasoning_prefix for call in self.calls]

    async def complete(self, messages: ChatMessages, reasoning_prefix: Optional[str] = None) -> PolicyOutput:
        self.calls.append(PolicyCall([dict(m) for m in messages], reasoning_prefix))
        if self._position < len(self._outputs):
            text = self._outputs[self._position]
            self._position += 1
        elif self._repeat_last and self._outputs:
            text = self._outputs[-1]
        else:
            text = STOP_TOKEN
        return PolicyOutput(text=text)


class ScriptedUserSimulator(UserSimulator):
    def __init__(self, user: ScriptedUser):
        self._user = user

    async def first_message(self) -> str:
        return self._user.first_message()

    async def next_message(self, history: Sequence[Utterance]) -> str:
        return self._user.next_message(history)


class ScriptedUserFactory(UserSimulatorFactory):
    def for_task(self, task: TaskSpec) -> UserSimulator:
        return ScriptedUserSimulator(ScriptedUser.for_task(task))
