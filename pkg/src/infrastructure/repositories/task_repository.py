"""
Task catalog backed by a list loaded from a task file.
"""

from typing import Iterable, Optional

from src.application.ports.repositories import TaskRepository
from src.domain.entities.task import TaskSpec


class InMemoryTaskRepository(TaskRepository):
    def __init__(self, tasks: Iterable[TaskSpec] = ()):
        self._tasks: dict[str, TaskSpec] = {}
        for task in tasks:
            self._tasks[task.task_id] = task

    async def get(self, task_id: str) -> Optional[TaskSpec]:
        return self._tasks.get(task_id)

    async def list_all(self) -> list[TaskSpec]:
        return list(self._tasks.values())

    def __len__(self) -> int:
        return len(self._tasks)
