"""
Unit tests for the rule-based verifier.
"""

import itertools

import pytest

from src.domain.entities.task import GroundTruth
from src.domain.entities.tools import ToolResult
from src.domain.entities.trajectory import UserMessage
from src.domain.services.verifier import (
    extract_integer,
    extract_writes,
    output_check,
    verify,
    verify_math,
    verify_trajectory,
)
from src.domain.value_objects.rewards import Mismatch
from src.domain.value_objects.tool_call import ToolCall

CANCEL = ToolCall("cancel_pending_order", {"order_id": "#W6390527", "reason": "no longer needed"})
ADDRESS = ToolCall(
    "modify_pending_order_address",
    {"order_id": "#W3818056", "address1": "1 Main St", "address2": "", "city": "Denver",
     "state": "CO", "country": "USA", "zip": "80279"},
)
PAYMENT = ToolCall("modify_pending_order_payment", {"order_id": "#W3818056", "payment_method_id": "paypal_5727330"})


def _perturb(value):
    if isinstance(value, list):
        return value[:-1] + [value[-1] + "0"]
    return value + "X"


class TestVerify:
    """Tests for the multiset comparison of writes."""

    def test_exchange_fixture_verifies(self, exchange_call):
        report = verify([exchange_call], GroundTruth(calls=(exchange_call,)))

        assert report.reward == 1
        assert report.mismatch == Mismatch.MATCH

    def test_every_single_argument_perturbation_fails(self, exchange_call):
        """Changing any one argument flips the verdict to wrong_args."""
        truth = GroundTruth(calls=(exchange_call,))
        for key, value in exchange_call.arguments.items():
            perturbed = ToolCall(exchange_call.name, {**exchange_call.arguments, key: _perturb(value)})

            report = verify([perturbed], truth)

            assert report.reward == 0, key
            assert report.mismatch == Mismatch.WRONG_ARGS, key

    def test_pairs_compare_as_a_multiset(self, exchange_call):
        """Reordering (old, new) pairs consistently keeps the match."""
        args = exchange_call.arguments
        reordered = ToolCall(
            exchange_call.name,
            {**args, "item_ids": args["item_ids"][::-1], "new_item_ids": args["new_item_ids"][::-1]},
        )

        assert verify([reordered], GroundTruth(calls=(exchange_call,))).reward == 1

    def test_crossed_pairs_do_not_match(self, exchange_call):
        args = exchange_call.arguments
        crossed = ToolCall(exchange_call.name, {**args, "new_item_ids": args["new_item_ids"][::-1]})

        report = verify([crossed], GroundTruth(calls=(exchange_call,)))

        assert report.reward == 0
        assert report.mismatch == Mismatch.WRONG_ARGS

    @pytest.mark.parametrize("size", [1, 2, 3, 4])
    def test_call_order_never_matters(self, exchange_call, size):
        """Exhaustive over permutations of up to four writes."""
        calls = [exchange_call, CANCEL, ADDRESS, PAYMENT][:size]
        truth = GroundTruth(calls=tuple(calls))
        for permutation in itertools.permutations(calls):
            assert verify(list(permutation), truth).reward == 1
        shuffled_wrong = calls[:-1] + [ToolCall(calls[-1].name, {})]
        for permutation in itertools.permutations(shuffled_wrong):
            assert verify(list(permutation), truth).reward == 0

    def test_strings_are_trimmed_and_numbers_normalized(self):
        expected = ToolCall("refund", {"order_id": "#W1", "amount": "2.50"})
        written = ToolCall("refund", {"order_id": "  #W1 ", "amount": 2.5})

        assert verify([written], GroundTruth(calls=(expected,))).reward == 1

    def test_unnecessary_write(self):
        report = verify([CANCEL, PAYMENT], GroundTruth(calls=(CANCEL,)))

        assert report.reward == 0
        assert report.mismatch == Mismatch.UNNECESSARY_WRITE
        assert report.details[0]["kind"] == "unexpected"

    def test_missing_write(self):
        report = verify([], GroundTruth(calls=(CANCEL,)))

        assert report.mismatch == Mismatch.MISSING_WRITE
        assert report.details == ({"kind": "missing", "call": CANCEL.to_dict(), "count": 1},)

    def test_duplicate_write_is_unnecessary(self):
        report = verify([CANCEL, CANCEL], GroundTruth(calls=(CANCEL,)))

        assert report.mismatch == Mismatch.UNNECESSARY_WRITE

    def test_no_writes_expected_and_none_made(self):
        assert verify([], GroundTruth()).reward == 1


class TestVerifyTrajectory:
    """Tests for extracting successful writes from a trajectory."""

    def test_failed_and_read_calls_are_ignored(self, test_data_builder):
        trajectory = test_data_builder.trajectory([(CANCEL, "", "ok")])
        failed = test_data_builder.turn(
            2, PAYMENT, feedback="Error", result=ToolResult.failure("insufficient_balance", "no funds")
        )
        read = test_data_builder.turn(
            3, ToolCall("get_order_details", {"order_id": "#W1"}), feedback="{}", result=ToolResult.success({})
        )
        trajectory.turns.extend([failed, read])

        assert extract_writes(trajectory) == [CANCEL]
        assert verify_trajectory(trajectory, GroundTruth(calls=(CANCEL,))).reward == 1

    def test_output_check_zeroes_the_reward(self, test_data_builder):
        trajectory = test_data_builder.trajectory(
            [(CANCEL, "", "ok"), (UserMessage("Your order is cancelled."), "", "thanks")]
        )
        truth = GroundTruth(calls=(CANCEL,), expected_outputs=("150.58",))

        report = verify_trajectory(trajectory, truth, check_outputs=True)

        assert report.reward == 0
        assert report.output_check is False
        assert report.mismatch == Mismatch.MATCH

    def test_output_check_is_case_insensitive(self):
        assert output_check(["Refund of 150.58 to your CREDIT card"], ["credit card", "150.58"])
        assert not output_check(["Refund issued"], ["150.58"])

    def test_output_check_off_by_default(self, test_data_builder):
        trajectory = test_data_builder.trajectory([(CANCEL, "", "ok")])
        truth = GroundTruth(calls=(CANCEL,), expected_outputs=("150.58",))

        report = verify_trajectory(trajectory, truth)

        assert report.reward == 1
        assert report.output_check is None


class TestMath:
    """Tests for integer answer extraction."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("The answer is \\boxed{391}.", 391),
            ("Maybe 12, but really \\boxed{391}", 391),
            ("So we get 1,024 marbles", 1024),
            ("The total is 391.0", 391),
            ("The total is 391.5", None),
            ("No number here", None),
            ("It is -7", -7),
        ],
    )
    def test_extract_integer(self, text, expected):
        assert extract_integer(text) == expected

    def test_verify_math(self):
        assert verify_math("\\boxed{391}", 391) == 1
        assert verify_math("\\boxed{390}", 391) == 0
