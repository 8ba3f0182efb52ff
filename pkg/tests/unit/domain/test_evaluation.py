"""
Unit tests for pass^k evaluation.
"""

import random
from fractions import Fraction

import pytest

from src.domain.exceptions import PassKError
from src.domain.services.evaluation import (
    OutcomeMatrix,
    PassKEstimator,
    pass_hat_k,
    pass_table,
    task_pass_hat_k,
)


class TestPassHatK:
    """Tests for the unbiased all-k-correct estimator."""

    def test_two_task_example(self):
        matrix = OutcomeMatrix({"a": [1, 1], "b": [1, 0]})

        assert pass_hat_k(matrix, 1) == Fraction(3, 4)
        assert pass_hat_k(matrix, 2) == Fraction(1, 2)

    def test_single_task_counts(self):
        """Three of four rollouts succeed: C(3,2)/C(4,2) = 1/2."""
        assert task_pass_hat_k([1, 1, 0, 1], 2) == Fraction(1, 2)

    def test_k_equal_n_is_the_product(self):
        rng = random.Random(5)
        for _ in range(200):
            row = [rng.choice([0, 1]) for _ in range(rng.randint(1, 8))]

            assert task_pass_hat_k(row, len(row)) == (1 if all(row) else 0)

    def test_antitone_in_k(self):
        """pass^k never increases with k."""
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(1, 8)
            matrix = OutcomeMatrix({f"t{i}": [rng.choice([0, 1]) for _ in range(n)] for i in range(rng.randint(1, 5))})

            table = pass_table(matrix, n)

            values = [table[k] for k in range(1, n + 1)]
            assert values == sorted(values, reverse=True)
            assert all(0 <= v <= 1 for v in values)

    def test_batches_estimator(self):
        """Disjoint batches of size k; leftovers are dropped."""
        row = [1, 1, 0, 1, 1]

        assert task_pass_hat_k(row, 2, PassKEstimator.BATCHES) == Fraction(1, 2)
        assert task_pass_hat_k(row, 1, PassKEstimator.BATCHES) == Fraction(4, 5)

    @pytest.mark.parametrize("k", [0, 3])
    def test_invalid_k(self, k):
        with pytest.raises(PassKError):
            pass_hat_k(OutcomeMatrix({"a": [1, 0]}), k)

    def test_empty_matrix(self):
        with pytest.raises(PassKError):
            pass_hat_k(OutcomeMatrix(), 1)


class TestOutcomeMatrix:
    def test_from_pairs_keeps_rollout_order(self):
        matrix = OutcomeMatrix.from_pairs([("a", 1), ("b", 0), ("a", 0)])

        assert matrix.outcomes == {"a": [1, 0], "b": [0]}
        assert matrix.min_rollouts == 1
        assert len(matrix) == 2

    def test_rejects_non_binary_outcomes(self):
        with pytest.raises(ValueError):
            OutcomeMatrix({"a": [1, 2]})
        with pytest.raises(ValueError):
            OutcomeMatrix().add("a", -1)
