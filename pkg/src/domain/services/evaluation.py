"""
pass^k evaluation over per-task rollout outcomes.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable

from src.domain.exceptions import PassKError


class PassKEstimator(str, Enum):
    UNBIASED = "unbiased"
    BATCHES = "batches"


@dataclass
class OutcomeMatrix:
    """Binary rollout outcomes per task, in rollout order."""

    outcomes: dict[str, list[int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for task_id, row in self.outcomes.items():
            if any(v not in (0, 1) for v in row):
                raise ValueError(f"outcomes for {task_id} must be 0 or 1")

    def add(self, task_id: str, outcome: int) -> None:
        if outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        self.outcomes.setdefault(task_id, []).append(outcome)

    @property
    def min_rollouts(self) -> int:
        return min((len(row) for row in self.outcomes.values()), default=0)

    def __len__(self) -> int:
        return len(self.outcomes)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "OutcomeMatrix":
        matrix = cls()
        for task_id, outcome in pairs:
            matrix.add(task_id, outcome)
        return matrix


def _unbiased(row: list[int], k: int) -> Fraction:
    return Fraction(comb(sum(row), k), comb(len(row), k))


def _batches(row: list[int], k: int) -> Fraction:
    batches = [row[i:i + k] for i in range(0, len(row) - k + 1, k)]
    return Fraction(sum(1 for b in batches if all(b)), len(batches))


def task_pass_hat_k(row: list[int], k: int, estimator: PassKEstimator = PassKEstimator.UNBIASED) -> Fraction:
    if k < 1:
        raise PassKError("k must be at least 1")
    if k > len(row):
        raise PassKError(f"k={k} exceeds the {len(row)} available rollouts")
    return _unbiased(row, k) if estimator == PassKEstimator.UNBIASED else _batches(row, k)


def pass_hat_k(
    matrix: OutcomeMatrix,
    k: int,
    estimator: PassKEstimator = PassKEstimator.UNBIASED,
) -> Fraction:
    """
    Mean over tasks of the all-k-correct statistic.

    The unbiased estimator uses C(c, k) / C(n, k); with n == k it is the
    product of the task's outcomes.

    Raises:
        PassKError: Empty matrix, k < 1, or k above some task's rollout count
    """
    if not matrix.outcomes:
        raise PassKError("no outcomes to evaluate")
    terms = [task_pass_hat_k(row, k, estimator) for row in matrix.outcomes.values()]
    return sum(terms, Fraction(0)) / len(terms)


def pass_table(
    matrix: OutcomeMatrix,
    max_k: int = 4,
    estimator: PassKEstimator = PassKEstimator.UNBIASED,
) -> dict[int, Fraction]:
    return {k: pass_hat_k(matrix, k, estimator) for k in range(1, max_k + 1)}
