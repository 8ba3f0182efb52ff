"""
Use case: per-token advantages for groups of scored trajectories.

Trajectories are grouped by task id. For gae the reward field comes from
assign_rewards and values from the trajectory (zeros if absent). For grpo
and rloo the group baseline is computed from each trajectory's reward
total (the TARL total, or 10 * R when the trajectory was never scored).
In trajectory_level mode the scalar advantage is written on every agent
token. In per_turn mode each agent token carries its reward-to-go
minus the group baseline (divided by the group std for grpo).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np

from src.domain.entities.trajectory import RolloutGroup, Trajectory
from src.domain.exceptions import AdvantageInputError
from src.domain.services.advantages import (
    AssignMode,
    ClipConfig,
    assign_rewards,
    broadcast_scalar_advantages,
    gae,
    grpo_advantages,
    rloo_advantages,
)
from src.domain.services.tarl import terminal_only
from src.domain.services.trajectory_ops import build_loss_mask
from src.domain.value_objects.rewards import RewardBreakdown


class Algorithm(str, Enum):
    GAE = "gae"
    GRPO = "grpo"
    RLOO = "rloo"


@dataclass(frozen=True)
class AdvantageRecord:
    task_id: str
    rollout_index: int
    advantages: list[float]
    mask: list[int]

    def to_dict(self) -> dict[str, Any]:
        return {
            "task_id": self.task_id,
            "rollout_index": self.rollout_index,
            "advantages": self.advantages,
            "mask": self.mask,
        }


def _breakdown(trajectory: Trajectory) -> RewardBreakdown:
    return trajectory.breakdown or terminal_only(trajectory.terminal_reward or 0)


def group_by_task(trajectories: list[Trajectory]) -> dict[str, list[Trajectory]]:
    groups: dict[str, list[Trajectory]] = {}
    for trajectory in trajectories:
        groups.setdefault(trajectory.task_id, []).append(trajectory)
    for members in groups.values():
        members.sort(key=lambda t: t.rollout_index)
    return groups


class ComputeAdvantagesUseCase:
    def __init__(self, clip: ClipConfig = ClipConfig(), std_eps: float = 0.0):
        self._clip = clip
        self._std_eps = std_eps

    def execute(
        self,
        trajectories: list[Trajectory],
        algorithm: Algorithm,
        mode: AssignMode,
    ) -> list[AdvantageRecord]:
        """
        Raises:
            AdvantageInputError: A group smaller than 2 where a group baseline
                is needed, or misaligned per-token arrays
        """
        records: list[AdvantageRecord] = []
        for task_id, members in group_by_task(trajectories).items():
            group = RolloutGroup(trajectories=members, scalar_rewards=[_breakdown(t).total for t in members])
            needs_group = algorithm != Algorithm.GAE or mode == AssignMode.TRAJECTORY_LEVEL
            if needs_group and group.size < 2:
                raise AdvantageInputError(f"incomplete group for task {task_id}: {group.size} rollout(s)")

            for trajectory in members:
                field = self._field(trajectory, group, algorithm, mode)
                mask = build_loss_mask(trajectory)
                records.append(
                    AdvantageRecord(
                        task_id=task_id,
                        rollout_index=trajectory.rollout_index,
                        advantages=[float(v) for v in field],
                        mask=[int(b) for b in mask],
                    )
                )
        return records

    def _field(self, trajectory: Trajectory, group: RolloutGroup, algorithm: Algorithm, mode: AssignMode):
        mask = build_loss_mask(trajectory)
        breakdown = _breakdown(trajectory)

        if algorithm == Algorithm.GAE:
            rewards = assign_rewards(trajectory, breakdown, mode, group=group, std_eps=self._std_eps)
            values = trajectory.values if trajectory.values is not None else np.zeros(len(mask))
            return gae(rewards, values, self._clip.gamma, self._clip.lam, mask=mask)

        index = group.index_of(trajectory)
        scalars = (
            grpo_advantages(group, std_eps=self._std_eps) if algorithm == Algorithm.GRPO else rloo_advantages(group)
        )
        if mode == AssignMode.TRAJECTORY_LEVEL:
            return broadcast_scalar_advantages(mask, scalars[index])

        rewards = np.array([float(r) for r in group.scalar_rewards], dtype=np.float64)
        token_rewards = assign_rewards(trajectory, breakdown, AssignMode.PER_TURN)
        positions = np.flatnonzero(mask)
        to_go = np.cumsum(token_rewards[positions][::-1])[::-1]
        if algorithm == Algorithm.GRPO:
            if np.all(rewards == rewards[0]):
                return np.zeros(len(mask))
            advantages = (to_go - rewards.mean()) / (rewards.std() + self._std_eps)
        else:
            others = (rewards.sum() - rewards[index]) / (len(rewards) - 1)
            advantages = to_go - others
        out = np.zeros(len(mask))
        out[positions] = advantages
        return out
