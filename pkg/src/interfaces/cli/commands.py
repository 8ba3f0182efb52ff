"""
Operator commands: serve, run, verify, score, eval and advantages.

Exit codes: 0 success, 1 usage error, 2 configuration or input error,
3 finished with partial failures (details in the summary).
"""

import argparse
import asyncio
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

import structlog

from src.application.ports.actors import PolicyClient, UserSimulatorFactory
from src.application.use_cases.compute_advantages import Algorithm, ComputeAdvantagesUseCase
from src.application.use_cases.evaluate import EvaluateUseCase, EvaluationReport
from src.application.use_cases.run_episode import RunEpisodeUseCase
from src.application.use_cases.run_group import RunGroupUseCase
from src.application.use_cases.score_trajectory import ScoreTrajectoryUseCase
from src.config.logging import configure_logging
from src.domain.entities.task import DomainTag, TaskSpec
from src.domain.entities.trajectory import Trajectory, TrajectoryStatus
from src.domain.exceptions import DomainException, UnknownToolError
from src.domain.services.advantages import AssignMode, ClipConfig
from src.domain.services.evaluation import PassKEstimator
from src.domain.services.react import strip_reasoning
from src.domain.services.tarl import TarlScale
from src.domain.services.task_mixer import TaskMixer
from src.domain.services.toolkit import build_retail_registry
from src.domain.services.trajectory_ops import stats
from src.domain.services.verifier import verify_math, verify_trajectory
from src.domain.value_objects.rewards import ScoringMode
from src.infrastructure.adapters.actor_providers import LocalActorProvider, PolicyFactory, WireActorProvider
from src.infrastructure.adapters.chat_client import ChatCompletionClient
from src.infrastructure.adapters.llm_actors import ChatPolicyClient, LlmJudge, LlmUserFactory, load_template
from src.infrastructure.adapters.scripted import ScriptedPolicy, ScriptedUserFactory
from src.infrastructure.adapters.tool_executors import SandboxWireClient
from src.infrastructure.exceptions import ConfigurationException
from src.infrastructure.serialization.seed_file import load_seed_file
from src.infrastructure.serialization.task_codec import TaskModel, load_tasks
from src.infrastructure.serialization.trajectory_codec import read_trajectories, write_atomic, write_trajectories
from src.interfaces.cli.manifest import JudgeManifest, PolicyBackendConfig, RunManifest, UserBackendConfig, load_manifest

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(summary: dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def _task_index(path: Path) -> dict[str, TaskModel]:
    return {model.task_id: model for model in load_tasks(path)}


def _task_for(tasks: dict[str, TaskModel], trajectory: Trajectory) -> TaskSpec:
    model = tasks.get(trajectory.task_id)
    if model is None:
        raise ConfigurationException(f"trajectory references unknown task {trajectory.task_id}")
    return model.to_domain()


# run


def _policy_factory(config: PolicyBackendConfig, tasks: dict[str, TaskModel], seed: Optional[int]) -> tuple[PolicyFactory, list[ChatCompletionClient]]:
    if config.backend == "scripted":
        def scripted(task: TaskSpec, rollout_index: int) -> PolicyClient:
            return ScriptedPolicy(tasks[task.task_id].policy_script or [])

        return scripted, []

    chat = config.chat.model_copy(update={"seed": seed}) if seed is not None else config.chat
    client = ChatCompletionClient(chat)

    def chat_policy(task: TaskSpec, rollout_index: int) -> PolicyClient:
        return ChatPolicyClient(client)

    return chat_policy, [client]


def _user_factory(config: UserBackendConfig) -> tuple[UserSimulatorFactory, list[ChatCompletionClient]]:
    if config.backend == "scripted":
        return ScriptedUserFactory(), []
    client = ChatCompletionClient(config.chat)
    return LlmUserFactory(client), [client]


@dataclass
class RunOutcome:
    trajectories: list[Trajectory]
    summary: dict[str, Any]


def summarize_run(trajectories: list[Trajectory], seed: Optional[int]) -> dict[str, Any]:
    finished = [t for t in trajectories if t.num_turns]
    per_traj = [stats(t) for t in finished]
    transport = sum(1 for t in trajectories if t.status == TrajectoryStatus.TRANSPORT_ERROR)
    rewards = [t.terminal_reward or 0 for t in trajectories]
    return {
        "num_trajectories": len(trajectories),
        "num_tasks": len({t.task_id for t in trajectories}),
        "terminal_reward_rate": sum(rewards) / len(rewards) if rewards else 0.0,
        "mean_wait": sum(s.wait_count for s in per_traj) / len(per_traj) if per_traj else 0.0,
        "mean_len": sum(s.avg_agent_len for s in per_traj) / len(per_traj) if per_traj else 0.0,
        "transport_failures": transport,
        "max_turns_reached": sum(1 for t in trajectories if t.status == TrajectoryStatus.MAX_TURNS),
        "seed": seed,
    }


def draw_batches(manifest: RunManifest, tasks: list[TaskSpec], group_size: int) -> list[tuple[TaskSpec, int]]:
    """
    Task batches for a run, each with the first rollout index of its group.

    Without a mix schedule every task is one batch, in file order. With one,
    batches come from the task mixer and a task drawn again continues its
    rollout numbering.
    """
    if manifest.mix_schedule is None:
        return [(task, 0) for task in tasks]
    mixer = TaskMixer.from_tasks(manifest.mix_schedule, tasks)
    drawn: dict[str, int] = {}
    batches = []
    for task in mixer.take(manifest.mix_draws or len(tasks)):
        repeats = drawn.get(task.task_id, 0)
        drawn[task.task_id] = repeats + 1
        batches.append((task, repeats * group_size))
    logger.info("task batches drawn", schedule=[tag.value for tag in manifest.mix_schedule], batches=len(batches))
    return batches


async def execute_run(
    manifest: RunManifest,
    jobs: int = 1,
    seed: Optional[int] = None,
    rollouts: Optional[int] = None,
) -> RunOutcome:
    tasks = _task_index(manifest.tasks_path)
    seed_store = load_seed_file(manifest.seed_path)
    try:
        registry = build_retail_registry().filtered(manifest.enabled_tools)
    except UnknownToolError as exc:
        raise ConfigurationException(f"enabled_tools: {exc.message}") from exc
    policy_doc = manifest.policy_doc_path.read_text(encoding="utf-8") if manifest.policy_doc_path else ""

    runner = RunEpisodeUseCase(registry, manifest.episode.to_config(rollouts), policy_doc=policy_doc)
    batches = draw_batches(manifest, [model.to_domain() for model in tasks.values()], runner.config.num_rollout)
    policies, policy_clients = _policy_factory(manifest.policy, tasks, seed)
    wire: Optional[SandboxWireClient] = None
    user_clients: list[ChatCompletionClient] = []
    if manifest.sandbox_url:
        wire = SandboxWireClient(manifest.sandbox_url)
        provider = WireActorProvider(wire, policies)
    else:
        users, user_clients = _user_factory(manifest.user)
        provider = LocalActorProvider(registry, seed_store, users, policies)

    groups = RunGroupUseCase(runner, provider, max_concurrency=jobs)
    try:
        results = await asyncio.gather(*(groups.execute(task, first_index=first) for task, first in batches))
    finally:
        for client in policy_clients + user_clients:
            await client.close()
        if wire is not None:
            await wire.close()

    trajectories = [t for group in results for t in group.trajectories]
    return RunOutcome(trajectories=trajectories, summary=summarize_run(trajectories, seed))


def cmd_run(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest, RunManifest)
    output = Path(args.output) if args.output else manifest.output_path
    outcome = asyncio.run(execute_run(manifest, jobs=args.jobs, seed=args.seed, rollouts=args.rollouts))
    write_trajectories(output, outcome.trajectories)
    summary = {"command": "run", "output": str(output), **outcome.summary}
    _emit(summary)
    return EXIT_PARTIAL if summary["transport_failures"] else EXIT_OK


# verify


def reverify(trajectory: Trajectory, task: TaskSpec, check_outputs: bool) -> Trajectory:
    if trajectory.status == TrajectoryStatus.TRANSPORT_ERROR:
        trajectory.terminal_reward = 0
        return trajectory
    if task.domain_tag == DomainTag.MATH:
        answer = strip_reasoning(trajectory.turns[-1].agent.text) if trajectory.turns else ""
        trajectory.terminal_reward = verify_math(answer, task.expected_answer or 0)
        return trajectory
    report = verify_trajectory(trajectory, task.ground_truth, check_outputs=check_outputs)
    trajectory.verify_report = report
    trajectory.terminal_reward = report.reward
    return trajectory


def cmd_verify(args: argparse.Namespace) -> int:
    tasks = _task_index(Path(args.tasks))
    trajectories = read_trajectories(args.input)
    changed = 0
    for trajectory in trajectories:
        before = trajectory.terminal_reward
        reverify(trajectory, _task_for(tasks, trajectory), args.check_outputs)
        changed += int(before != trajectory.terminal_reward)
    output = Path(args.output or args.input)
    write_trajectories(output, trajectories)
    rewards = [t.terminal_reward or 0 for t in trajectories]
    _emit(
        {
            "command": "verify",
            "output": str(output),
            "num_trajectories": len(trajectories),
            "verified_correct": sum(rewards),
            "changed": changed,
        }
    )
    return EXIT_OK


# score


async def execute_score(
    trajectories: list[Trajectory],
    tasks: Optional[dict[str, TaskModel]],
    judge_manifest: Optional[JudgeManifest],
    terminal_only_mode: bool,
    scale: TarlScale,
) -> None:
    client: Optional[ChatCompletionClient] = None
    judge = None
    if judge_manifest is not None and not terminal_only_mode:
        client = ChatCompletionClient(judge_manifest.chat)
        policy_doc = judge_manifest.policy_doc_path.read_text(encoding="utf-8") if judge_manifest.policy_doc_path else ""
        judge = LlmJudge(client, load_template(judge_manifest.template_path), policy_doc)
        scale = judge_manifest.scale
    scorer = ScoreTrajectoryUseCase(judge, scale, retries=judge_manifest.retries if judge_manifest else 1)
    try:
        for trajectory in trajectories:
            task = _task_for(tasks, trajectory) if tasks is not None and judge is not None else None
            await scorer.execute(trajectory, task, terminal_only_mode=terminal_only_mode)
    finally:
        if client is not None:
            await client.close()


def cmd_score(args: argparse.Namespace) -> int:
    if not args.terminal_only and not args.judge_config:
        raise ConfigurationException("score needs --judge-config or --terminal-only")
    judge_manifest = load_manifest(args.judge_config, JudgeManifest) if args.judge_config and not args.terminal_only else None
    if judge_manifest is not None and not args.tasks:
        raise ConfigurationException("judge scoring needs --tasks for ground truth and instructions")
    tasks = _task_index(Path(args.tasks)) if args.tasks else None
    trajectories = read_trajectories(args.input)
    asyncio.run(execute_score(trajectories, tasks, judge_manifest, args.terminal_only, TarlScale(args.scale)))

    output = Path(args.output or args.input)
    write_trajectories(output, trajectories)
    histogram: dict[str, int] = {}
    fallbacks = 0
    for trajectory in trajectories:
        breakdown = trajectory.breakdown
        histogram[breakdown.category.value] = histogram.get(breakdown.category.value, 0) + 1
        fallbacks += int(breakdown.mode == ScoringMode.JUDGE_FALLBACK)
    _emit(
        {
            "command": "score",
            "output": str(output),
            "num_trajectories": len(trajectories),
            "categories": dict(sorted(histogram.items())),
            "judge_fallbacks": fallbacks,
        }
    )
    return EXIT_PARTIAL if fallbacks else EXIT_OK


# eval


def render_report(report: EvaluationReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    ks = sorted(report.pass_k)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["metric", "value"])
        for k in ks:
            writer.writerow([f"pass^{k}", f"{float(report.pass_k[k]):.4f}"])
        writer.writerow(["mean_wait", f"{report.mean_wait:.4f}"])
        writer.writerow(["mean_len", f"{report.mean_len:.4f}"])
        writer.writerow(["transport_failures", report.transport_failures])
        return buffer.getvalue()

    header = "  ".join(f"pass^{k:<5}" for k in ks)
    values = "  ".join(f"{float(report.pass_k[k]):<10.4f}" for k in ks)
    lines = [
        f"tasks: {len(report.outcomes)}  trajectories: {report.num_trajectories}  estimator: {report.estimator.value}",
        header,
        values,
        f"mean #Wait: {report.mean_wait:.4f}  mean Len: {report.mean_len:.4f}  transport failures: {report.transport_failures}",
        "",
        "per task:",
    ]
    for task_id, row in sorted(report.outcomes.items()):
        lines.append(f"  {task_id}: {sum(row)}/{len(row)}")
    return "\n".join(lines) + "\n"


def cmd_eval(args: argparse.Namespace) -> int:
    trajectories: list[Trajectory] = []
    for path in args.input:
        trajectories.extend(read_trajectories(path))
    report = EvaluateUseCase().execute(
        trajectories,
        max_k=args.max_k,
        estimator=PassKEstimator(args.estimator),
        exclude_transport=args.exclude_transport,
    )
    text = render_report(report, args.format)
    if args.output:
        write_atomic(args.output, text)
    sys.stdout.write(text)
    return EXIT_OK


# advantages


def cmd_advantages(args: argparse.Namespace) -> int:
    trajectories = read_trajectories(args.input)
    clip = ClipConfig(gamma=args.gamma, lam=args.lam)
    records = ComputeAdvantagesUseCase(clip, std_eps=args.std_eps).execute(
        trajectories, Algorithm(args.algorithm), AssignMode(args.mode)
    )
    lines = [json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":")) for r in records]
    write_atomic(args.output, "".join(line + "\n" for line in lines))
    _emit(
        {
            "command": "advantages",
            "output": str(args.output),
            "algorithm": args.algorithm,
            "mode": args.mode,
            "num_records": len(records),
        }
    )
    return EXIT_OK


# serve


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from src.config.settings import Settings, get_settings
    from src.infrastructure.config.dependency_injection import get_container

    overrides = {k: v for k, v in (("api_host", args.host), ("api_port", args.port)) if v is not None}
    if args.config:
        settings = Settings.from_file(args.config, **overrides)
    else:
        settings = get_settings().model_copy(update=overrides)
    container = get_container()
    container.configure(settings)
    container.warm_up()
    configure_logging(settings.log_level, settings.log_json)

    from src.interfaces.main import create_app

    uvicorn.run(create_app(), **settings.get_uvicorn_config())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="python -m src.interfaces.cli", description="Agentic RL rollout and reward tooling")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--log-json", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    serve = sub.add_parser("serve", help="run the tool sandbox service")
    serve.add_argument("--config", help="JSON config file (host/port, seed path, tool roster, simulators)")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.set_defaults(handler=cmd_serve)

    run = sub.add_parser("run", help="collect rollouts for every task in a manifest")
    run.add_argument("--manifest", required=True)
    run.add_argument("--output")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--seed", type=int)
    run.add_argument("--rollouts", type=int, help="override episode.num_rollout")
    run.set_defaults(handler=cmd_run)

    verify = sub.add_parser("verify", help="re-verify trajectories against their tasks")
    verify.add_argument("--input", required=True)
    verify.add_argument("--tasks", required=True)
    verify.add_argument("--output")
    verify.add_argument("--check-outputs", action="store_true")
    verify.set_defaults(handler=cmd_verify)

    score = sub.add_parser("score", help="attach turn scores and reward breakdowns")
    score.add_argument("--input", required=True)
    score.add_argument("--output")
    score.add_argument("--tasks")
    score.add_argument("--judge-config")
    score.add_argument("--terminal-only", action="store_true")
    score.add_argument("--scale", choices=[s.value for s in TarlScale], default=TarlScale.CAPPED.value)
    score.set_defaults(handler=cmd_score)

    evaluate = sub.add_parser("eval", help="pass^k report")
    evaluate.add_argument("--input", required=True, nargs="+")
    evaluate.add_argument("--max-k", type=int, default=4)
    evaluate.add_argument("--estimator", choices=[e.value for e in PassKEstimator], default=PassKEstimator.UNBIASED.value)
    evaluate.add_argument("--exclude-transport", action="store_true")
    evaluate.add_argument("--format", choices=["text", "json", "csv"], default="text")
    evaluate.add_argument("--output")
    evaluate.set_defaults(handler=cmd_eval)

    advantages = sub.add_parser("advantages", help="per-token advantages for scored groups")
    advantages.add_argument("--input", required=True)
    advantages.add_argument("--output", required=True)
    advantages.add_argument("--algorithm", choices=[a.value for a in Algorithm], required=True)
    advantages.add_argument("--mode", choices=[m.value for m in AssignMode], default=AssignMode.PER_TURN.value)
    advantages.add_argument("--std-eps", type=float, default=0.0)
    advantages.add_argument("--gamma", type=float, default=1.0)
    advantages.add_argument("--lam", type=float, default=1.0)
    advantages.set_defaults(handler=cmd_advantages)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be at least 1")
    configure_logging(args.log_level, args.log_json)
    try:
        return args.handler(args)
    except ConfigurationException as exc:
        logger.error("configuration error", error=exc.message, path=exc.path)
        sys.stderr.write(f"error: {exc.message}\n")
        return EXIT_CONFIG
    except DomainException as exc:
        logger.error("invalid input", error=exc.message, code=exc.error_code)
        sys.stderr.write(f"error: {exc.message}\n")
        return EXIT_CONFIG
    except (FileNotFoundError, ValueError) as exc:
        logger.error("invalid input", error=str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
