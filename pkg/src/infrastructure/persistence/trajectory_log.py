"""
Append-only trajectory log.

Records are JSON lines ``{"record_id": ..., "record": {...}}``; an in-memory
index maps record ids to byte offsets and is rebuilt by scanning the file on
open. The log has a single writer and any number of readers.
"""

import asyncio
import json
import uuid
from pathlib import Path
from typing import Optional

import structlog

from src.application.exceptions import RepositoryException
from src.application.ports.repositories import TrajectoryRepository
from src.domain.entities.trajectory import Trajectory
from src.domain.exceptions import TrajectoryDecodeError
from src.infrastructure.serialization.trajectory_codec import deserialize, to_record

logger = structlog.get_logger(__name__)


class JsonlTrajectoryLog(TrajectoryRepository):
    def __init__(self, path: Path | str):
        self._path = Path(path)
        self._lock = asyncio.Lock()
        self._index: dict[str, int] = {}
        self._load_index()

    @property
    def path(self) -> Path:
        return self._path

    def _load_index(self) -> None:
        if not self._path.exists():
            return
        offset = 0
        with self._path.open("rb") as handle:
            for number, raw in enumerate(handle, start=1):
                try:
                    entry = json.loads(raw)
                    self._index[str(entry["record_id"])] = offset
                except (json.JSONDecodeError, KeyError, TypeError):
                    # torn trailing write; later records are still indexed
                    logger.warning("skipping unreadable log line", path=str(self._path), line=number)
                offset += len(raw)

    async def append(self, trajectory: Trajectory) -> str:
        record_id = uuid.uuid4().hex
        line = json.dumps(
            {"record_id": record_id, "record": to_record(trajectory)},
            ensure_ascii=False,
            separators=(",", ":"),
        ) + "\n"
        async with self._lock:
            try:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with self._path.open("a+b") as handle:
                    offset = handle.seek(0, 2)
                    if offset:
                        handle.seek(offset - 1)
                        if handle.read(1) != b"\n":
                            # close off a torn line so the new record starts on its own
                            handle.write(b"\n")
                            offset += 1
                    handle.write(line.encode("utf-8"))
            except OSError as exc:
                raise RepositoryException(f"cannot append to {self._path}: {exc}") from exc
            self._index[record_id] = offset
        return record_id

    async def fetch(self, record_id: str) -> Optional[Trajectory]:
        offset = self._index.get(record_id)
        if offset is None:
            return None
        with self._path.open("rb") as handle:
            handle.seek(offset)
            raw = handle.readline().decode("utf-8")
        entry = json.loads(raw)
        try:
            return deserialize(json.dumps(entry["record"]))
        except TrajectoryDecodeError as exc:
            raise RepositoryException(f"record {record_id} is corrupt: {exc.message}") from exc

    async def count(self) -> int:
        return len(self._index)

    async def health_check(self) -> bool:
        try:
            self._path.parent.mkdir(parents=True, exist_ok=True)
        except OSError:
            return False
        return True
