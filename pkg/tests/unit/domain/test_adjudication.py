"""
Unit tests for judge prompt rendering and verdict parsing.
"""

import pytest

from src.domain.entities.task import GroundTruth
from src.domain.entities.trajectory import Stop, UserMessage
from src.domain.exceptions import AdjudicationError
from src.domain.services.adjudication import parse_turn_scores, render_conversation, render_judge_prompt
from tests.conftest import JUDGE_PROMPT_PATH


class TestRendering:
    """Tests for the judge prompt."""

    def test_turns_are_labeled_from_zero(self, test_data_builder):
        trajectory = test_data_builder.trajectory(test_data_builder.chat_turns(2))

        rendered = render_conversation(trajectory)

        assert "[Turn 0]" in rendered
        assert "[Turn 1]" in rendered
        assert "[Turn 2]" not in rendered

    def test_stop_turn_has_no_response(self, test_data_builder):
        trajectory = test_data_builder.trajectory([(UserMessage("Done."), "", "thanks"), (Stop(), "", "")])

        assert "(no response)" in render_conversation(trajectory)

    def test_bundled_template_is_filled(self, test_data_builder, exchange_call):
        template = JUDGE_PROMPT_PATH.read_text(encoding="utf-8")
        trajectory = test_data_builder.trajectory(test_data_builder.chat_turns(3))

        prompt = render_judge_prompt(
            template, trajectory, GroundTruth(calls=(exchange_call,)), "Be polite.", "Exchange my backpack."
        )

        assert "Be polite." in prompt
        assert "Exchange my backpack." in prompt
        assert "exchange_delivered_order_items" in prompt
        assert "[Turn 2]" in prompt
        assert "doesn't need to follow the exact order" in prompt
        assert "If the turn has issue (e.g., not following the policy or function call formats), assign a score of 0." in prompt
        assert "<think></think>" in prompt
        for marker in ("{policy}", "{instruction}", "{ground_truth}", "{conversation}"):
            assert marker not in prompt


class TestParseTurnScores:
    """Tests for strict verdict parsing."""

    def test_plain_object(self):
        assert parse_turn_scores('{"score_0": 1, "score_1": -1, "score_2": 0}', 3).scores == (1, -1, 0)

    def test_last_object_after_reasoning_wins(self):
        raw = (
            '<think>Maybe {"score_0": -1, "score_1": -1}?</think>'
            'Draft: {"score_0": 0, "score_1": 0}\nFinal: {"score_0": 1, "score_1": 0}'
        )

        assert parse_turn_scores(raw, 2).scores == (1, 0)

    def test_lenient_number_forms(self):
        """String integers and integral floats are accepted."""
        assert parse_turn_scores('{"score_0": "1", "score_1": -1.0}', 2).scores == (1, -1)

    def test_duplicate_major_deviation_is_clamped(self):
        scores = parse_turn_scores('{"score_0": -1, "score_1": 1, "score_2": -1}', 3)

        assert scores.scores == (-1, 1, 0)
        assert scores.warnings == ("score_2: duplicate -1 clamped to 0",)

    @pytest.mark.parametrize(
        "raw",
        [
            "The agent did fine.",
            '{"score_0": 1}',
            '{"score_0": 1, "score_1": 1, "score_2": 1}',
            '{"score_0": 2, "score_1": 1}',
            '{"score_0": true, "score_1": 1}',
            '{"score_0": "x", "score_1": 1}',
            '{"score_0": 0.5, "score_1": 1}',
        ],
    )
    def test_invalid_verdicts(self, raw):
        with pytest.raises(AdjudicationError) as exc_info:
            parse_turn_scores(raw, 2)

        assert exc_info.value.raw == raw
