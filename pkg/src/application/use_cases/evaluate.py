"""
Use case: pass^k evaluation report over finished trajectories.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from src.domain.entities.trajectory import Trajectory, TrajectoryStatus
from src.domain.exceptions import PassKError
from src.domain.services.evaluation import OutcomeMatrix, PassKEstimator, pass_table
from src.domain.services.trajectory_ops import stats


@dataclass
class EvaluationReport:
    outcomes: dict[str, list[int]]
    pass_k: dict[int, Fraction]
    mean_wait: float
    mean_len: float
    transport_failures: int
    num_trajectories: int
    estimator: PassKEstimator = PassKEstimator.UNBIASED
    categories: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "num_trajectories": self.num_trajectories,
            "num_tasks": len(self.outcomes),
            "estimator": self.estimator.value,
            "pass_k": {f"pass^{k}": float(v) for k, v in self.pass_k.items()},
            "pass_k_exact": {f"pass^{k}": str(v) for k, v in self.pass_k.items()},
            "mean_wait": self.mean_wait,
            "mean_len": self.mean_len,
            "transport_failures": self.transport_failures,
            "categories": dict(self.categories),
            "per_task": {task: list(row) for task, row in sorted(self.outcomes.items())},
        }


class EvaluateUseCase:
    """
    Builds the outcome matrix and the pass^1..max_k table.

    Transport failures count as failures unless `exclude_transport` is set,
    in which case they leave the outcome matrix entirely.
    """

    def execute(
        self,
        trajectories: list[Trajectory],
        max_k: int = 4,
        estimator: PassKEstimator = PassKEstimator.UNBIASED,
        exclude_transport: bool = False,
    ) -> EvaluationReport:
        if not trajectories:
            raise PassKError("no trajectories to evaluate")

        matrix = OutcomeMatrix()
        waits: list[int] = []
        lengths: list[float] = []
        categories: dict[str, int] = {}
        transport_failures = 0

        for trajectory in sorted(trajectories, key=lambda t: (t.task_id, t.rollout_index)):
            failed_transport = trajectory.status == TrajectoryStatus.TRANSPORT_ERROR
            transport_failures += int(failed_transport)
            if failed_transport and exclude_transport:
                continue
            matrix.add(trajectory.task_id, trajectory.terminal_reward or 0)
            if trajectory.breakdown is not None:
                name = trajectory.breakdown.category.value
                categories[name] = categories.get(name, 0) + 1
            if trajectory.num_turns:
                summary = stats(trajectory)
                waits.append(summary.wait_count)
                lengths.append(summary.avg_agent_len)

        if not matrix.outcomes:
            raise PassKError("no outcomes left after excluding transport failures")
        if max_k > matrix.min_rollouts:
            raise PassKError(f"k={max_k} exceeds the {matrix.min_rollouts} rollouts available for some task")

        return EvaluationReport(
            outcomes=dict(matrix.outcomes),
            pass_k=pass_table(matrix, max_k, estimator),
            mean_wait=sum(waits) / len(waits) if waits else 0.0,
            mean_len=sum(lengths) / len(lengths) if lengths else 0.0,
            transport_failures=transport_failures,
            num_trajectories=len(trajectories),
            estimator=estimator,
            categories=categories,
        )
