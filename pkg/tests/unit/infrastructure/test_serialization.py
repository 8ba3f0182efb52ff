"""
Unit tests for trajectory records, task files and seed files.
"""

import json

import pytest

from src.domain.entities.task import GroundTruth
from src.domain.entities.tools import ToolResult
from src.domain.entities.trajectory import InvalidAction, Stop, Trajectory, TrajectoryStatus, Turn, UserMessage
from src.domain.exceptions import TrajectoryDecodeError
from src.domain.services.tarl import combine
from src.domain.services.trajectory_ops import agent_segment, environment_segment
from src.domain.services.verifier import verify_trajectory
from src.domain.value_objects.rewards import TurnScores
from src.domain.value_objects.tool_call import ToolCall
from src.infrastructure.exceptions import ConfigurationException
from src.infrastructure.serialization.seed_file import load_seed_file
from src.infrastructure.serialization.task_codec import load_tasks, parse_tasks
from src.infrastructure.serialization.trajectory_codec import (
    deserialize,
    dumps,
    read_trajectories,
    serialize,
    to_record,
    write_trajectories,
)
from tests.conftest import SEED_PATH


@pytest.fixture
def scored_trajectory(test_data_builder, exchange_call):
    """A three-turn trajectory with every optional field filled in."""
    trajectory = test_data_builder.trajectory(
        [
            (UserMessage("Which order?"), "Ask first.", "#W7678072"),
            (exchange_call, "Submit it.", '{"price_difference": "2.51"}'),
            (Stop(), "Done.", ""),
        ],
        task_id="retail_exchange_noah",
        rollout_index=2,
        terminal_reward=1,
    )
    trajectory.verify_report = verify_trajectory(trajectory, GroundTruth(calls=(exchange_call,)))
    trajectory.turn_scores = TurnScores((1, 1, 0))
    trajectory.breakdown = combine(trajectory.turn_scores, 1, 3)
    return trajectory


class TestTrajectoryCodec:
    """Tests for the line-delimited record format."""

    def test_record_fields(self, scored_trajectory):
        record = to_record(scored_trajectory)

        assert record["task_id"] == "retail_exchange_noah"
        assert record["rollout_index"] == 2
        assert record["turns"][1]["action"]["type"] == "tool_call"
        assert record["turns"][2]["action"] == {"type": "stop"}
        assert record["breakdown"]["total"] == "40/3"
        assert record["stats"]["num_turns"] == 3

    def test_decoding_restores_the_trajectory(self, scored_trajectory, exchange_call):
        decoded = deserialize(serialize(scored_trajectory))

        assert decoded.num_turns == 3
        assert decoded.turns[1].action == exchange_call
        assert decoded.turns[1].tool_result == scored_trajectory.turns[1].tool_result
        assert decoded.breakdown == scored_trajectory.breakdown
        assert decoded.tokens == scored_trajectory.tokens
        assert serialize(decoded) == serialize(scored_trajectory)

    def test_invalid_action_survives(self):
        turn = Turn(
            index=1,
            thought="",
            action=InvalidAction(raw="<think>oops", error="unterminated <think>"),
            agent=agent_segment("<think>oops"),
            feedback=environment_segment("Error: unterminated <think>"),
        )

        decoded = deserialize(serialize(Trajectory(task_id="t", turns=[turn])))

        assert decoded.turns[0].action == InvalidAction(raw="<think>oops", error="unterminated <think>")

    def test_transport_trajectory_without_turns(self, test_data_builder):
        trajectory = test_data_builder.trajectory(task_id="t", status=TrajectoryStatus.TRANSPORT_ERROR, terminal_reward=0)

        decoded = deserialize(serialize(trajectory))

        assert decoded.status == TrajectoryStatus.TRANSPORT_ERROR
        assert to_record(trajectory)["stats"] is None

    def test_syntax_error_reports_line_and_offset(self):
        with pytest.raises(TrajectoryDecodeError) as exc_info:
            deserialize('{"task_id": "t", "turns": [}', line_number=7)

        assert exc_info.value.line_number == 7
        assert exc_info.value.offset == 27

    def test_schema_error_names_the_field(self):
        with pytest.raises(TrajectoryDecodeError) as exc_info:
            deserialize(json.dumps({"task_id": "t"}), line_number=3)

        assert "turns" in exc_info.value.message
        assert exc_info.value.line_number == 3

    def test_non_object_line(self):
        with pytest.raises(TrajectoryDecodeError):
            deserialize("[1, 2]")

    def test_file_round_trip_is_byte_stable(self, tmp_path, scored_trajectory, test_data_builder):
        path = tmp_path / "out" / "trajectories.jsonl"
        trajectories = [scored_trajectory, test_data_builder.trajectory(test_data_builder.chat_turns(2))]

        write_trajectories(path, trajectories)
        reread = read_trajectories(path)

        assert path.read_text(encoding="utf-8") == dumps(trajectories)
        assert dumps(reread) == dumps(trajectories)
        assert not list(path.parent.glob(".trajectories.jsonl.*"))

    def test_bad_line_in_file(self, tmp_path, scored_trajectory):
        path = tmp_path / "trajectories.jsonl"
        path.write_text(serialize(scored_trajectory) + "\n\nnot json\n", encoding="utf-8")

        with pytest.raises(TrajectoryDecodeError) as exc_info:
            read_trajectories(path)

        assert exc_info.value.line_number == 3


class TestTaskFiles:
    """Tests for loading task files."""

    def test_bundled_tasks(self, task_models):
        assert set(task_models) == {"retail_exchange_noah", "retail_cancel_mei", "math_product"}
        assert task_models["math_product"].to_domain().expected_answer == 391

    def test_json_lines_format(self):
        text = "\n".join(
            json.dumps({"task_id": f"t{i}", "user_instruction": "x"}) for i in range(2)
        )

        assert [m.task_id for m in parse_tasks(text)] == ["t0", "t1"]

    def test_duplicate_ids(self):
        text = json.dumps([{"task_id": "t", "user_instruction": "x"}] * 2)

        with pytest.raises(ConfigurationException) as exc_info:
            parse_tasks(text, "tasks.json")

        assert "duplicate task_id t" in exc_info.value.message
        assert exc_info.value.path == "tasks.json"

    def test_math_task_needs_answer(self):
        with pytest.raises(ConfigurationException):
            parse_tasks(json.dumps([{"task_id": "m", "user_instruction": "x", "domain_tag": "math"}]))

    def test_unknown_field(self):
        with pytest.raises(ConfigurationException) as exc_info:
            parse_tasks(json.dumps([{"task_id": "t", "user_instruction": "x", "difficulty": 3}]))

        assert "difficulty" in exc_info.value.message

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationException):
            load_tasks(tmp_path / "nope.json")


class TestSeedFiles:
    def test_bundled_seed(self):
        store = load_seed_file(SEED_PATH)

        assert store.version == 0
        assert "#W7678072" in store.orders

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "seed.json"
        path.write_text("{", encoding="utf-8")

        with pytest.raises(ConfigurationException) as exc_info:
            load_seed_file(path)

        assert exc_info.value.path == str(path)

    def test_schema_violation_is_reported_with_the_file(self, tmp_path, seed_document):
        broken = json.loads(json.dumps(seed_document))
        del broken["users"]["noah_brown_6181"]["email"]
        path = tmp_path / "seed.json"
        path.write_text(json.dumps(broken), encoding="utf-8")

        with pytest.raises(ConfigurationException) as exc_info:
            load_seed_file(path)

        assert "users.noah_brown_6181.email" in exc_info.value.message


def test_tool_result_records_keep_error_fields(test_data_builder):
    turn = test_data_builder.turn(
        1,
        ToolCall("get_order_details", {"order_id": "#W0"}),
        feedback="Error (order_not_found): no such order",
        result=ToolResult.failure("order_not_found", "no such order"),
    )
    decoded = deserialize(serialize(Trajectory(task_id="t", turns=[turn])))

    assert decoded.turns[0].tool_result.error_code == "order_not_found"
