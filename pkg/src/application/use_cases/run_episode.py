"""
Use case: run one agent episode.

The agent and the environment alternate: the policy writes a ReACT turn,
tool calls are executed against the episode's isolated store and user
messages are answered by the user simulator. The episode ends on
"##STOP##" or after `max_turns` turns and is scored by the verifier.
"""

import json
from dataclasses import dataclass
from typing import Optional

import structlog

from src.application.exceptions import TransportError
from src.application.ports.actors import ChatMessages, EpisodeActors, PolicyOutput
from src.domain.entities.task import DomainTag, TaskSpec
from src.domain.entities.tools import ToolResult, ToolSpec
from src.domain.entities.trajectory import (
    STOP_TOKEN,
    Action,
    InvalidAction,
    Speaker,
    Stop,
    Trajectory,
    TrajectoryStatus,
    Turn,
    UserMessage,
    Utterance,
)
from src.domain.exceptions import PreconditionViolation, ReactParseError
from src.domain.services.intervention import CORRECTION_SENTENCE, InterventionDecision, InterventionPolicy
from src.domain.services.react import parse_react, strip_reasoning, with_reasoning_prefix
from src.domain.services.tokenizer import DEFAULT_TOKENIZER, Tokenizer
from src.domain.services.toolkit import ToolRegistry
from src.domain.services.trajectory_ops import agent_segment, environment_segment
from src.domain.services.verifier import verify_math, verify_trajectory
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)

TOOL_RESULT_PREFIX = "[tool_result] "


@dataclass(frozen=True)
class EpisodeConfig:
    max_turns: int = 30
    temperature: float = 0.7
    top_p: float = 0.95
    num_rollout: int = 4
    intervention_enabled: bool = False
    intervention_limit: int = 2
    check_outputs: bool = False

    def __post_init__(self) -> None:
        if self.max_turns < 1:
            raise ValueError("max_turns must be at least 1")
        if self.num_rollout < 1:
            raise ValueError("num_rollout must be at least 1")
        if self.intervention_limit < 0:
            raise ValueError("intervention_limit must be non-negative")


def render_system_prompt(tools: list[ToolSpec], policy_doc: str = "") -> str:
    listing = json.dumps([spec.to_descriptor() for spec in tools], indent=2)
    parts = [
        "You are a customer service agent for an online retail store.",
        policy_doc.strip(),
        "Available tools:",
        listing,
        "Think inside <think>...</think>, then either call one tool as "
        '<tool_call>{"name": ..., "arguments": {...}}</tool_call> or reply to the user in plain text.',
    ]
    return "\n\n".join(p for p in parts if p)


def render_tool_feedback(result: ToolResult) -> str:
    if result.ok:
        return json.dumps(result.payload, sort_keys=True, ensure_ascii=False)
    return f"Error ({result.error_code}): {result.error_message}"


@dataclass
class _TurnDraft:
    text: str
    thought: str
    action: Action
    interventions: int
    output: PolicyOutput


class RunEpisodeUseCase:
    """
    Drives a single rollout.

    Each step queries the policy, parses its output and, when intervention
    is enabled, may discard a deviant write and re-query with the
    correction sentence as the start of the agent's reasoning.
    """

    def __init__(
        self,
        registry: ToolRegistry,
        config: EpisodeConfig = EpisodeConfig(),
        tokenizer: Tokenizer = DEFAULT_TOKENIZER,
        policy_doc: str = "",
    ):
        self._registry = registry
        self._config = config
        self._tokenizer = tokenizer
        self._policy_doc = policy_doc
        self._intervention = InterventionPolicy(registry, limit=config.intervention_limit)

    @property
    def config(self) -> EpisodeConfig:
        return self._config

    async def execute(self, task: TaskSpec, actors: EpisodeActors, rollout_index: int = 0) -> Trajectory:
        log = logger.bind(task_id=task.task_id, rollout_index=rollout_index)
        trajectory = Trajectory(task_id=task.task_id, rollout_index=rollout_index, prompt=task.user_instruction)
        try:
            if task.domain_tag == DomainTag.MATH:
                await self._run_math(task, actors, trajectory)
            else:
                await self._run_retail(task, actors, trajectory)
        except TransportError as exc:
            trajectory.status = TrajectoryStatus.TRANSPORT_ERROR
            trajectory.error = exc.message
            trajectory.terminal_reward = 0
            log.warning("episode aborted", error=exc.message, turns=trajectory.num_turns)
            return trajectory

        log.info(
            "episode finished",
            status=trajectory.status.value,
            turns=trajectory.num_turns,
            terminal_reward=trajectory.terminal_reward,
        )
        return trajectory

    async def _run_math(self, task: TaskSpec, actors: EpisodeActors, trajectory: Trajectory) -> None:
        messages: ChatMessages = [{"role": "user", "content": task.user_instruction}]
        draft = await self._draft(messages, actors, task)
        answer = strip_reasoning(draft.text)
        turn = Turn(
            index=1,
            thought=draft.thought,
            action=draft.action,
            agent=agent_segment(draft.text, self._tokenizer),
            feedback=environment_segment("", self._tokenizer),
        )
        self._append(trajectory, turn, draft.output)
        trajectory.status = TrajectoryStatus.COMPLETED
        trajectory.terminal_reward = verify_math(answer, task.expected_answer or 0)

    async def _run_retail(self, task: TaskSpec, actors: EpisodeActors, trajectory: Trajectory) -> None:
        tools = await actors.executor.list_tools()
        opening = await actors.user.first_message()
        trajectory.prompt = opening
        history: list[Utterance] = [Utterance(Speaker.USER, opening)]
        messages: ChatMessages = [
            {"role": "system", "content": render_system_prompt(tools, self._policy_doc)},
            {"role": "user", "content": opening},
        ]
        speech = task.domain_tag == DomainTag.RETAIL_SPEECH
        finished = False

        for index in range(1, self._config.max_turns + 1):
            draft = await self._draft(messages, actors, task)
            messages.append({"role": "assistant", "content": draft.text})
            action = draft.action
            result: Optional[ToolResult] = None

            if isinstance(action, ToolCall):
                result = await actors.executor.execute(action)
                feedback_text = render_tool_feedback(result)
                feedback = environment_segment(feedback_text, self._tokenizer)
                messages.append({"role": "user", "content": TOOL_RESULT_PREFIX + feedback_text})
            elif isinstance(action, UserMessage):
                history.append(Utterance(Speaker.AGENT, action.text))
                reply = await actors.user.next_message(history)
                history.append(Utterance(Speaker.USER, reply))
                messages.append({"role": "user", "content": reply})
                finished = reply.strip() == STOP_TOKEN
                feedback = environment_segment(
                    reply,
                    self._tokenizer,
                    speech=speech and not finished,
                    audio_ref=f"audio://{task.task_id}/{trajectory.rollout_index}/{index}" if speech else None,
                )
            elif isinstance(action, Stop):
                feedback = environment_segment("", self._tokenizer)
                finished = True
            else:
                feedback_text = f"Error: {action.error}"
                feedback = environment_segment(feedback_text, self._tokenizer)
                messages.append({"role": "user", "content": feedback_text})

            turn = Turn(
                index=index,
                thought=draft.thought,
                action=action,
                agent=agent_segment(draft.text, self._tokenizer),
                feedback=feedback,
                tool_result=result,
                interventions=draft.interventions,
            )
            self._append(trajectory, turn, draft.output)
            if finished:
                break

        trajectory.status = TrajectoryStatus.COMPLETED if finished else TrajectoryStatus.MAX_TURNS
        report = verify_trajectory(trajectory, task.ground_truth, check_outputs=self._config.check_outputs)
        trajectory.verify_report = report
        trajectory.terminal_reward = report.reward

    async def _draft(self, messages: ChatMessages, actors: EpisodeActors, task: TaskSpec) -> _TurnDraft:
        counter = 0
        prefix: Optional[str] = None
        while True:
            output = await actors.policy.complete(list(messages), reasoning_prefix=prefix)
            text = output.text if prefix is None else with_reasoning_prefix(output.text, prefix)
            thought, action = self._parse(text)

            if self._config.intervention_enabled and task.domain_tag.is_retail:
                decision = self._intervention.decide(action, task.ground_truth, counter)
                if decision == InterventionDecision.RETRY:
                    counter += 1
                    prefix = CORRECTION_SENTENCE
                    continue
            return _TurnDraft(text=text, thought=thought, action=action, interventions=counter, output=output)

    @staticmethod
    def _parse(text: str) -> tuple[str, Action]:
        try:
            parsed = parse_react(text)
        except ReactParseError as exc:
            return "", InvalidAction(raw=text, error=exc.message)
        except PreconditionViolation:
            return "", InvalidAction(raw=text, error="empty agent output")
        return parsed.thought, parsed.action

    @staticmethod
    def _append(trajectory: Trajectory, turn: Turn, output: PolicyOutput) -> None:
        """Append a turn and keep optional per-token arrays aligned with the token stream."""
        trajectory.turns.append(turn)
        first = trajectory.num_turns == 1
        for name in ("logprobs", "entropies"):
            values = getattr(output, name)
            current = getattr(trajectory, name)
            if values is not None and len(values) == len(turn.agent) and (first or current is not None):
                padding = [0.0] * len(turn.feedback)
                setattr(trajectory, name, (current or []) + list(values) + padding)
            else:
                setattr(trajectory, name, None)
