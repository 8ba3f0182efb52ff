"""
Chat-endpoint backed actors: user simulator, judge and policy.
"""

from pathlib import Path
from typing import Optional, Sequence

import structlog

from src.application.ports.actors import (
    ChatMessages,
    PolicyClient,
    PolicyOutput,
    TurnJudge,
    UserSimulator,
    UserSimulatorFactory,
)
from src.domain.entities.task import GroundTruth, TaskSpec
from src.domain.entities.trajectory import STOP_TOKEN, Speaker, Trajectory, Utterance
from src.domain.services.adjudication import parse_turn_scores, render_judge_prompt
from src.domain.services.react import THINK_OPEN, strip_reasoning
from src.domain.value_objects.rewards import TurnScores
from src.infrastructure.adapters.chat_client import ChatCompletionClient
from src.infrastructure.exceptions import ConfigurationException

logger = structlog.get_logger(__name__)

USER_SYSTEM_PROMPT = """You are playing the role of a customer contacting an online store's support agent.

Your goal:
{instruction}

Rules:
- First think step by step inside <think>...</think> about what to say next, then write only the message to the agent.
- Reveal information only when the agent asks for it, and stay consistent with your goal.
- Do not invent information that is not in your goal.
- When your goal is fully satisfied, or it cannot be satisfied, reply with exactly {stop}.
"""


def load_template(path: Path | str) -> str:
    target = Path(path)
    if not target.is_file():
        raise ConfigurationException("prompt template not found", str(target))
    return target.read_text(encoding="utf-8")


class LlmUserSimulator(UserSimulator):
    """
    User simulator backed by a chat endpoint.

    The model answers in ReACT form; only the reply outside the reasoning
    block reaches the agent. Any reply containing the stop token stops.
    """

    def __init__(self, client: ChatCompletionClient, instruction: str, opening: Optional[str] = None):
        self._client = client
        self._instruction = instruction
        self._opening = opening

    def _messages(self, history: Sequence[Utterance]) -> ChatMessages:
        messages: ChatMessages = [
            {"role": "system", "content": USER_SYSTEM_PROMPT.format(instruction=self._instruction, stop=STOP_TOKEN)}
        ]
        for utterance in history:
            # the simulated user is the assistant of this conversation
            role = "assistant" if utterance.speaker == Speaker.USER else "user"
            messages.append({"role": role, "content": utterance.text})
        return messages

    async def _reply(self, messages: ChatMessages) -> str:
        completion = await self._client.complete(messages)
        reply = strip_reasoning(completion.text)
        if STOP_TOKEN in reply or not reply:
            return STOP_TOKEN
        return reply

    async def first_message(self) -> str:
        if self._opening:
            return self._opening
        messages = self._messages([])
        messages.append({"role": "user", "content": "Hi! How can I help you today?"})
        return await self._reply(messages)

    async def next_message(self, history: Sequence[Utterance]) -> str:
        return await self._reply(self._messages(history))


class LlmUserFactory(UserSimulatorFactory):
    def __init__(self, client: ChatCompletionClient):
        self._client = client

    def for_task(self, task: TaskSpec) -> UserSimulator:
        return LlmUserSimulator(self._client, task.user_instruction, task.user_opening)


class LlmJudge(TurnJudge):
    def __init__(self, client: ChatCompletionClient, template: str, policy_doc: str = ""):
        self._client = client
        self._template = template
        self._policy_doc = policy_doc

    async def adjudicate(self, trajectory: Trajectory, truth: GroundTruth, instruction: str) -> TurnScores:
        prompt = render_judge_prompt(self._template, trajectory, truth, self._policy_doc, instruction)
        completion = await self._client.complete([{"role": "user", "content": prompt}])
        scores = parse_turn_scores(completion.text, trajectory.num_turns)
        logger.debug("turn scores", task_id=trajectory.task_id, scores=list(scores.scores))
        return scores


class ChatPolicyClient(PolicyClient):
    """
    Policy served by a chat endpoint.

    A reasoning prefix is sent as a partial assistant message that the
    endpoint continues; the returned text re-opens the reasoning block so the
    caller can put the prefix back in front of it.
    """

    def __init__(self, client: ChatCompletionClient):
        self._client = client

    async def complete(self, messages: ChatMessages, reasoning_prefix: Optional[str] = None) -> PolicyOutput:
        if reasoning_prefix is None:
            completion = await self._client.complete(messages)
            return PolicyOutput(text=completion.text, logprobs=completion.logprobs)

        prefill = messages + [{"role": "assistant", "content": f"{THINK_OPEN}{reasoning_prefix}"}]
        completion = await self._client.complete(prefill, continue_final_message=True, add_generation_prompt=False)
        text = completion.text
        if not text.lstrip().startswith(THINK_OPEN):
            text = f"{THINK_OPEN}{text}"
        return PolicyOutput(text=text)
