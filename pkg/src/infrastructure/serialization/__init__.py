# Record codecs for trajectories and task files

from .seed_file import load_seed_file
from .task_codec import TaskModel, load_tasks, parse_tasks
from .trajectory_codec import (
    deserialize,
    dumps,
    read_trajectories,
    serialize,
    to_record,
    write_atomic,
    write_trajectories,
)

__all__ = [
    "deserialize",
    "dumps",
    "load_seed_file",
    "load_tasks",
    "parse_tasks",
    "read_trajectories",
    "serialize",
    "to_record",
    "write_atomic",
    "TaskModel",
    "write_trajectories",
]
