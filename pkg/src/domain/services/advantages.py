"""
Advantage engine.

Per-token fields are float64 numpy arrays aligned with a trajectory's token
stream; masks are boolean arrays of the same length. Every operation here is
pure. Environment positions never influence a masked result: masked
operations index only agent positions.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from src.domain.entities.trajectory import RolloutGroup, Trajectory
from src.domain.exceptions import AdvantageInputError
from src.domain.services.trajectory_ops import LossMask, build_loss_mask
from src.domain.value_objects.rewards import RewardBreakdown

Field = npt.NDArray[np.float64]

TERMINAL_SCALE = 10.0


class AssignMode(str, Enum):
    PER_TURN = "per_turn"
    TRAJECTORY_LEVEL = "trajectory_level"


@dataclass(frozen=True)
class ClipConfig:
    epsilon: float = 0.2
    kl_coef: float = 0.001
    kl_loss_coef: float = 0.003
    gamma: float = 1.0
    lam: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0.0 <= self.gamma <= 1.0 or not 0.0 <= self.lam <= 1.0:
            raise ValueError("gamma and lambda must lie in [0, 1]")


def as_field(values: Sequence[float] | npt.ArrayLike, name: str = "field") -> Field:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 1:
        raise AdvantageInputError(f"{name} must be one-dimensional")
    return array


def _as_mask(mask: Sequence[bool] | npt.ArrayLike) -> LossMask:
    return np.asarray(mask, dtype=bool)


def _aligned(*arrays: np.ndarray) -> None:
    lengths = {len(a) for a in arrays}
    if len(lengths) > 1:
        raise AdvantageInputError(f"misaligned fields: lengths {sorted(lengths)}")


def _gae_backward(rewards: Field, values: Field, gamma: float, lam: float) -> Field:
    advantages = np.zeros_like(rewards)
    running = 0.0
    next_value = 0.0  # terminal bootstrap
    for t in range(len(rewards) - 1, -1, -1):
        delta = rewards[t] + gamma * next_value - values[t]
        running = delta + gamma * lam * running
        advantages[t] = running
        next_value = values[t]
    return advantages


def gae(
    rewards: npt.ArrayLike,
    values: npt.ArrayLike,
    gamma: float = 1.0,
    lam: float = 1.0,
    mask: Optional[npt.ArrayLike] = None,
) -> Field:
    """
    Generalized advantage estimate by a backward pass.

    rewards[j] is the reward received after token j, so
    delta_j = rewards[j] + gamma * V[j+1] - V[j] with V past the end equal to 0.
    With a mask the recursion runs over the agent-token subsequence and the
    result is scattered back; unmasked positions are 0.
    """
    r = as_field(rewards, "rewards")
    v = as_field(values, "values")
    if mask is None:
        _aligned(r, v)
        return _gae_backward(r, v, gamma, lam)

    m = _as_mask(mask)
    _aligned(r, v, m)
    positions = np.flatnonzero(m)
    out = np.zeros_like(r)
    out[positions] = _gae_backward(r[positions], v[positions], gamma, lam)
    return out


def reward_to_go(rewards: npt.ArrayLike, gamma: float = 1.0) -> Field:
    r = as_field(rewards, "rewards")
    out = np.zeros_like(r)
    running = 0.0
    for t in range(len(r) - 1, -1, -1):
        running = r[t] + gamma * running
        out[t] = running
    return out


def _group_rewards(rewards: Sequence[float] | RolloutGroup) -> Field:
    raw = rewards.scalar_rewards if isinstance(rewards, RolloutGroup) else rewards
    array = np.array([float(x) for x in raw], dtype=np.float64)
    if len(array) < 2:
        raise AdvantageInputError(f"group needs at least 2 rollouts, got {len(array)}")
    return array


def grpo_advantages(rewards: Sequence[float] | RolloutGroup, std_eps: float = 0.0) -> Field:
    """
    Group-standardized advantages (R - mean) / (std + std_eps), population std.

    A group whose rewards are all equal yields all zeros.
    """
    r = _group_rewards(rewards)
    if np.all(r == r[0]):
        return np.zeros_like(r)
    return (r - r.mean()) / (r.std() + std_eps)


def rloo_advantages(rewards: Sequence[float] | RolloutGroup) -> Field:
    """Leave-one-out baseline: R_n minus the mean of the other rewards."""
    r = _group_rewards(rewards)
    others = (r.sum() - r) / (len(r) - 1)
    return r - others


def broadcast_scalar_advantages(mask: npt.ArrayLike, advantage: float) -> Field:
    m = _as_mask(mask)
    return np.where(m, float(advantage), 0.0)


def assign_rewards(
    trajectory: Trajectory,
    breakdown: Optional[RewardBreakdown] = None,
    mode: AssignMode = AssignMode.PER_TURN,
    group: Optional[RolloutGroup] = None,
    std_eps: float = 0.0,
) -> Field:
    """
    Per-token reward field.

    per_turn: each turn's contribution sits on the final agent token of that
    turn, and 10 * terminal is added on the final agent token of the last
    turn. trajectory_level: the group-standardized scalar of this trajectory
    is written at every agent token.
    """
    field = np.zeros(len(trajectory.tokens), dtype=np.float64)

    if mode == AssignMode.TRAJECTORY_LEVEL:
        if group is None:
            raise AdvantageInputError("trajectory_level assignment needs the rollout group")
        index = group.index_of(trajectory)
        if index is None:
            raise AdvantageInputError("trajectory is not a member of the rollout group")
        scalar = grpo_advantages(group, std_eps=std_eps)[index]
        return broadcast_scalar_advantages(build_loss_mask(trajectory), scalar)

    if breakdown is None:
        raise AdvantageInputError("per_turn assignment needs a reward breakdown")
    contributions = breakdown.turn_contributions
    if contributions and len(contributions) != trajectory.num_turns:
        raise AdvantageInputError(
            f"{len(contributions)} turn contributions for {trajectory.num_turns} turns"
        )
    spans = trajectory.turn_agent_spans()
    if any(end == start for start, end in spans):
        raise AdvantageInputError("every turn needs at least one agent token")

    for (start, end), contribution in zip(spans, contributions):
        field[end - 1] += float(contribution)
    if spans:
        field[spans[-1][1] - 1] += TERMINAL_SCALE * breakdown.terminal
    return field


def clipped_surrogate(ratio: float, advantage: float, epsilon: float = 0.2) -> float:
    """min(r * A, clip(r, 1 - eps, 1 + eps) * A)."""
    clipped = min(max(ratio, 1.0 - epsilon), 1.0 + epsilon)
    return min(ratio * advantage, clipped * advantage)


def ppo_clip_loss(
    logp_new: npt.ArrayLike,
    logp_old: npt.ArrayLike,
    advantages: npt.ArrayLike,
    mask: npt.ArrayLike,
    epsilon: float = 0.2,
) -> float:
    """Clipped surrogate loss normalized by this trajectory's agent-token count."""
    new = as_field(logp_new, "logp_new")
    old = as_field(logp_old, "logp_old")
    adv = as_field(advantages, "advantages")
    m = _as_mask(mask)
    _aligned(new, old, adv, m)

    positions = np.flatnonzero(m)
    if len(positions) == 0:
        return 0.0
    ratio = np.exp(new[positions] - old[positions])
    a = adv[positions]
    terms = np.minimum(ratio * a, np.clip(ratio, 1.0 - epsilon, 1.0 + epsilon) * a)
    return float(-terms.sum() / len(positions))


@dataclass(frozen=True)
class PpoInputs:
    logp_new: npt.ArrayLike
    logp_old: npt.ArrayLike
    advantages: npt.ArrayLike
    mask: npt.ArrayLike


def batch_ppo_loss(batch: Sequence[PpoInputs], epsilon: float = 0.2) -> float:
    """Unweighted mean of per-trajectory losses."""
    if not batch:
        raise AdvantageInputError("empty batch")
    losses = [ppo_clip_loss(b.logp_new, b.logp_old, b.advantages, b.mask, epsilon) for b in batch]
    return float(np.mean(losses))


def entropy_top_mask(entropies: npt.ArrayLike, mask: npt.ArrayLike, fraction: float = 0.2) -> LossMask:
    """
    Keep the ceil(fraction * n) highest-entropy agent tokens.

    Ties go to the earliest position.
    """
    if not 0.0 < fraction <= 1.0:
        raise AdvantageInputError("fraction must lie in (0, 1]")
    ent = as_field(entropies, "entropies")
    m = _as_mask(mask)
    _aligned(ent, m)

    positions = np.flatnonzero(m)
    if len(positions) == 0:
        raise AdvantageInputError("mask has no agent tokens")
    keep = math.ceil(round(fraction * len(positions), 9))
    order = positions[np.lexsort((positions, -ent[positions]))]
    out = np.zeros_like(m)
    out[order[:keep]] = True
    return out


def kl_penalty(logp_new: npt.ArrayLike, logp_ref: npt.ArrayLike, mask: npt.ArrayLike) -> float:
    """Masked mean of exp(d) - d - 1 with d = logp_ref - logp_new."""
    new = as_field(logp_new, "logp_new")
    ref = as_field(logp_ref, "logp_ref")
    m = _as_mask(mask)
    _aligned(new, ref, m)

    positions = np.flatnonzero(m)
    if len(positions) == 0:
        return 0.0
    delta = ref[positions] - new[positions]
    k3 = np.maximum(np.expm1(delta) - delta, 0.0)
    return float(k3.mean())
