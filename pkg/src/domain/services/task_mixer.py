"""
Round-robin task mixing across domain pools.
"""

from typing import Sequence

from src.domain.entities.task import DomainTag, TaskSpec
from src.domain.exceptions import EmptyPoolError, PreconditionViolation


class TaskMixer:
    """
    Cycles through `schedule`; each pool is consumed sequentially with
    wraparound, so the draw sequence is fully determined by pool order.
    """

    def __init__(self, schedule: Sequence[DomainTag], pools: dict[DomainTag, Sequence[TaskSpec]]):
        if not schedule:
            raise PreconditionViolation("mix schedule must be non-empty")
        self._schedule = list(schedule)
        self._pools = {tag: list(tasks) for tag, tasks in pools.items()}
        self._cursor = 0
        self._pool_cursors: dict[DomainTag, int] = {tag: 0 for tag in self._pools}

    @classmethod
    def from_tasks(cls, schedule: Sequence[DomainTag], tasks: Sequence[TaskSpec]) -> "TaskMixer":
        pools: dict[DomainTag, list[TaskSpec]] = {}
        for task in tasks:
            pools.setdefault(task.domain_tag, []).append(task)
        return cls(schedule, pools)

    def mix_next(self) -> TaskSpec:
        tag = self._schedule[self._cursor % len(self._schedule)]
        pool = self._pools.get(tag) or []
        if not pool:
            raise EmptyPoolError(tag.value)
        self._cursor += 1
        position = self._pool_cursors.get(tag, 0)
        self._pool_cursors[tag] = position + 1
        return pool[position % len(pool)]

    def take(self, count: int) -> list[TaskSpec]:
        return [self.mix_next() for _ in range(count)]
