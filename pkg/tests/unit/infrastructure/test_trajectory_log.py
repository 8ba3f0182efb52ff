"""
Unit tests for the append-only trajectory log.
"""

import pytest

from src.infrastructure.persistence.trajectory_log import JsonlTrajectoryLog


class TestJsonlTrajectoryLog:
    @pytest.mark.asyncio
    async def test_append_and_fetch(self, tmp_path, test_data_builder):
        # Arrange
        log = JsonlTrajectoryLog(tmp_path / "log" / "trajectories.jsonl")
        first = test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="a")
        second = test_data_builder.trajectory(test_data_builder.chat_turns(2), task_id="b")

        # Act
        first_id = await log.append(first)
        second_id = await log.append(second)

        # Assert
        assert first_id != second_id
        assert (await log.fetch(second_id)).task_id == "b"
        assert (await log.fetch(first_id)).num_turns == 1
        assert await log.count() == 2

    @pytest.mark.asyncio
    async def test_unknown_record(self, tmp_path):
        log = JsonlTrajectoryLog(tmp_path / "trajectories.jsonl")

        assert await log.fetch("0" * 32) is None

    @pytest.mark.asyncio
    async def test_index_is_rebuilt_on_open(self, tmp_path, test_data_builder):
        path = tmp_path / "trajectories.jsonl"
        record_id = await JsonlTrajectoryLog(path).append(test_data_builder.trajectory(task_id="kept"))

        reopened = JsonlTrajectoryLog(path)

        assert await reopened.count() == 1
        assert (await reopened.fetch(record_id)).task_id == "kept"

    @pytest.mark.asyncio
    async def test_torn_trailing_line_is_skipped(self, tmp_path, test_data_builder):
        """A partial last line from an interrupted write does not hide earlier records."""
        path = tmp_path / "trajectories.jsonl"
        record_id = await JsonlTrajectoryLog(path).append(test_data_builder.trajectory(task_id="kept"))
        with path.open("ab") as handle:
            handle.write(b'{"record_id": "abc", "rec')

        reopened = JsonlTrajectoryLog(path)

        assert await reopened.count() == 1
        assert (await reopened.fetch(record_id)).task_id == "kept"

    @pytest.mark.asyncio
    async def test_append_after_torn_line_survives_reopen(self, tmp_path, test_data_builder):
        # Arrange
        path = tmp_path / "trajectories.jsonl"
        first_id = await JsonlTrajectoryLog(path).append(test_data_builder.trajectory(task_id="t1"))
        with path.open("ab") as handle:
            handle.write(b'{"record_id":"torn","rec')
        log = JsonlTrajectoryLog(path)

        # Act
        second_id = await log.append(test_data_builder.trajectory(task_id="t2"))
        reopened = JsonlTrajectoryLog(path)

        # Assert
        assert (await log.fetch(second_id)).task_id == "t2"
        assert await reopened.count() == 2
        assert (await reopened.fetch(first_id)).task_id == "t1"
        assert (await reopened.fetch(second_id)).task_id == "t2"

    @pytest.mark.asyncio
    async def test_health_check(self, tmp_path):
        assert await JsonlTrajectoryLog(tmp_path / "nested" / "log.jsonl").health_check() is True
