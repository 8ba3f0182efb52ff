"""
Unit tests for trajectory scoring, advantages and evaluation.
"""

from fractions import Fraction
from unittest.mock import AsyncMock, Mock

import pytest

from src.application.exceptions import TransportError
from src.application.use_cases.compute_advantages import Algorithm, ComputeAdvantagesUseCase
from src.application.use_cases.evaluate import EvaluateUseCase
from src.application.use_cases.score_trajectory import ScoreTrajectoryUseCase
from src.domain.entities.trajectory import TrajectoryStatus, UserMessage
from src.domain.exceptions import AdjudicationError, AdvantageInputError, PassKError
from src.domain.services.advantages import AssignMode
from src.domain.services.evaluation import PassKEstimator
from src.domain.services.tarl import TarlScale, combine
from src.domain.services.trajectory_ops import build_loss_mask
from src.domain.value_objects.rewards import ScoringMode, TrajectoryCategory, TurnScores


@pytest.fixture
def mock_judge():
    judge = Mock()
    judge.adjudicate = AsyncMock()
    return judge


def _scored(builder, task_id: str, rollout_index: int, terminal: int, turns: int = 2):
    trajectory = builder.trajectory(
        builder.chat_turns(turns), task_id=task_id, rollout_index=rollout_index, terminal_reward=terminal
    )
    return trajectory


class TestScoreTrajectory:
    """Tests for judge-based scoring and its fallbacks."""

    @pytest.mark.asyncio
    async def test_judge_scores_are_combined(self, mock_judge, cancel_task, test_data_builder):
        # Arrange
        mock_judge.adjudicate.return_value = TurnScores((1, 1, 0))
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=1, turns=3)
        use_case = ScoreTrajectoryUseCase(mock_judge)

        # Act
        result = await use_case.execute(trajectory, cancel_task)

        # Assert
        assert result.breakdown.total == Fraction(40, 3)
        assert result.breakdown.category == TrajectoryCategory.GOOD
        assert result.turn_scores.scores == (1, 1, 0)
        mock_judge.adjudicate.assert_awaited_once_with(
            trajectory, cancel_task.ground_truth, cancel_task.user_instruction
        )

    @pytest.mark.asyncio
    async def test_malformed_verdict_is_retried_once(self, mock_judge, cancel_task, test_data_builder):
        mock_judge.adjudicate.side_effect = [AdjudicationError("bad"), TurnScores((1, 1))]
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=1)

        result = await ScoreTrajectoryUseCase(mock_judge, retries=1).execute(trajectory, cancel_task)

        assert mock_judge.adjudicate.await_count == 2
        assert result.breakdown.category == TrajectoryCategory.PERFECT

    @pytest.mark.asyncio
    async def test_repeated_malformed_verdicts_fall_back(self, mock_judge, cancel_task, test_data_builder):
        """After the retry the trajectory is scored on the terminal reward alone."""
        mock_judge.adjudicate.side_effect = AdjudicationError("bad")
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=1)

        result = await ScoreTrajectoryUseCase(mock_judge, retries=1).execute(trajectory, cancel_task)

        assert mock_judge.adjudicate.await_count == 2
        assert result.breakdown.mode == ScoringMode.JUDGE_FALLBACK
        assert result.breakdown.total == 10
        assert result.turn_scores is None

    @pytest.mark.asyncio
    async def test_transport_failure_falls_back_without_retry(self, mock_judge, cancel_task, test_data_builder):
        mock_judge.adjudicate.side_effect = TransportError("timeout", "http://judge")
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=0)

        result = await ScoreTrajectoryUseCase(mock_judge, retries=3).execute(trajectory, cancel_task)

        assert mock_judge.adjudicate.await_count == 1
        assert result.breakdown.mode == ScoringMode.JUDGE_FALLBACK
        assert result.breakdown.total == 0

    @pytest.mark.asyncio
    async def test_terminal_only_mode_skips_the_judge(self, mock_judge, cancel_task, test_data_builder):
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=1)

        result = await ScoreTrajectoryUseCase(mock_judge).execute(trajectory, cancel_task, terminal_only_mode=True)

        mock_judge.adjudicate.assert_not_awaited()
        assert result.breakdown.mode == ScoringMode.TERMINAL_ONLY
        assert result.breakdown.total == 10

    @pytest.mark.asyncio
    async def test_literal_scale(self, mock_judge, cancel_task, test_data_builder):
        mock_judge.adjudicate.return_value = TurnScores((1, 1))
        trajectory = _scored(test_data_builder, cancel_task.task_id, 0, terminal=1)

        result = await ScoreTrajectoryUseCase(mock_judge, scale=TarlScale.LITERAL).execute(trajectory, cancel_task)

        assert result.breakdown.total == 11


class TestComputeAdvantages:
    """Tests for grouping trajectories and producing per-token advantages."""

    def _group(self, builder, terminals):
        return [_scored(builder, "task", i, terminal) for i, terminal in enumerate(terminals)]

    def test_grpo_trajectory_level(self, test_data_builder):
        trajectories = self._group(test_data_builder, [1, 0, 0, 1])

        records = ComputeAdvantagesUseCase().execute(trajectories, Algorithm.GRPO, AssignMode.TRAJECTORY_LEVEL)

        assert [r.rollout_index for r in records] == [0, 1, 2, 3]
        for record, expected in zip(records, [1.0, -1.0, -1.0, 1.0]):
            assert all(a == pytest.approx(expected) for a, m in zip(record.advantages, record.mask) if m)
            assert all(a == 0.0 for a, m in zip(record.advantages, record.mask) if not m)

    def test_rloo_trajectory_level(self, test_data_builder):
        trajectories = self._group(test_data_builder, [1, 0, 0, 0])

        records = ComputeAdvantagesUseCase().execute(trajectories, Algorithm.RLOO, AssignMode.TRAJECTORY_LEVEL)

        first_agent = records[0].mask.index(1)
        assert records[0].advantages[first_agent] == pytest.approx(10.0)
        assert records[1].advantages[first_agent] == pytest.approx(-10 / 3)

    def test_gae_per_turn_without_critic(self, test_data_builder):
        """With no values every agent token carries its reward-to-go."""
        trajectory = _scored(test_data_builder, "task", 0, terminal=1)
        trajectory.breakdown = combine([1, 0], 1, 2)

        record = ComputeAdvantagesUseCase().execute([trajectory], Algorithm.GAE, AssignMode.PER_TURN)[0]

        mask = build_loss_mask(trajectory)
        agent_values = [a for a, m in zip(record.advantages, mask) if m]
        assert agent_values[0] == pytest.approx(12.5)
        assert agent_values[-1] == pytest.approx(10.0)
        assert record.mask == [int(m) for m in mask]

    def test_rloo_per_turn_is_reward_to_go_minus_baseline(self, test_data_builder):
        """Each agent token carries its reward-to-go minus the other rollouts' mean total."""
        # Arrange
        trajectories = self._group(test_data_builder, [1, 0])
        trajectories[0].breakdown = combine([1, 0], 1, 2)
        trajectories[1].breakdown = combine([0, 0], 0, 2)

        # Act
        records = ComputeAdvantagesUseCase().execute(trajectories, Algorithm.RLOO, AssignMode.PER_TURN)

        # Assert
        success = [a for a, m in zip(records[0].advantages, records[0].mask) if m]
        failure = [a for a, m in zip(records[1].advantages, records[1].mask) if m]
        assert success[0] == pytest.approx(12.5)
        assert success[-1] == pytest.approx(10.0)
        assert all(a == pytest.approx(-12.5) for a in failure)
        assert all(a == 0.0 for a, m in zip(records[0].advantages, records[0].mask) if not m)

    def test_grpo_per_turn_equal_rewards(self, test_data_builder):
        trajectories = self._group(test_data_builder, [1, 1])

        records = ComputeAdvantagesUseCase().execute(trajectories, Algorithm.GRPO, AssignMode.PER_TURN)

        assert all(a == 0.0 for record in records for a in record.advantages)

    def test_incomplete_group(self, test_data_builder):
        trajectories = self._group(test_data_builder, [1])

        with pytest.raises(AdvantageInputError):
            ComputeAdvantagesUseCase().execute(trajectories, Algorithm.GRPO, AssignMode.TRAJECTORY_LEVEL)


class TestEvaluate:
    """Tests for the evaluation report."""

    def test_report(self, test_data_builder):
        trajectories = [
            test_data_builder.trajectory(test_data_builder.chat_turns(1, thought="Wait."), task_id="a", rollout_index=0, terminal_reward=1),
            test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="a", rollout_index=1, terminal_reward=1),
            test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="b", rollout_index=0, terminal_reward=1),
            test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="b", rollout_index=1, terminal_reward=0),
        ]

        report = EvaluateUseCase().execute(trajectories, max_k=2)

        body = report.to_dict()
        assert body["pass_k"] == {"pass^1": 0.75, "pass^2": 0.5}
        assert body["pass_k_exact"] == {"pass^1": "3/4", "pass^2": "1/2"}
        assert body["mean_wait"] == 0.25
        assert body["per_task"] == {"a": [1, 1], "b": [1, 0]}
        assert body["transport_failures"] == 0

    def test_transport_failures_count_as_failures(self, test_data_builder):
        trajectories = [
            test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="a", rollout_index=0, terminal_reward=1),
            test_data_builder.trajectory(
                task_id="a", rollout_index=1, terminal_reward=0, status=TrajectoryStatus.TRANSPORT_ERROR
            ),
        ]

        counted = EvaluateUseCase().execute(trajectories, max_k=1)
        excluded = EvaluateUseCase().execute(trajectories, max_k=1, exclude_transport=True)

        assert counted.pass_k[1] == Fraction(1, 2)
        assert counted.transport_failures == 1
        assert excluded.pass_k[1] == 1

    def test_categories_and_batches(self, test_data_builder):
        trajectories = []
        for index, terminal in enumerate([1, 1, 0, 1]):
            trajectory = test_data_builder.trajectory(
                [(UserMessage("hi"), "", "ok")], task_id="a", rollout_index=index, terminal_reward=terminal
            )
            trajectory.breakdown = combine([1], terminal, 1)
            trajectories.append(trajectory)

        report = EvaluateUseCase().execute(trajectories, max_k=2, estimator=PassKEstimator.BATCHES)

        assert report.pass_k[2] == Fraction(1, 2)
        assert report.categories == {"Perfect": 3, "GoodAttempt": 1}

    def test_k_above_rollouts(self, test_data_builder):
        trajectories = [test_data_builder.trajectory(test_data_builder.chat_turns(1), task_id="a", terminal_reward=1)]

        with pytest.raises(PassKError):
            EvaluateUseCase().execute(trajectories, max_k=2)

    def test_nothing_to_evaluate(self):
        with pytest.raises(PassKError):
            EvaluateUseCase().execute([])
