"""
Real-time rollout intervention.

A write call that is not part of the ground truth is discarded and the
policy is re-queried with a fixed self-correction sentence, at most
`limit` times per reasoning step.
"""

from enum import Enum

import structlog

from src.domain.entities.task import GroundTruth
from src.domain.entities.trajectory import Action
from src.domain.services.toolkit import ToolRegistry
from src.domain.value_objects.tool_call import ToolCall

logger = structlog.get_logger(__name__)

CORRECTION_SENTENCE = "Wait, my previous reasoning might be wrong, let me try again."


class InterventionDecision(str, Enum):
    PROCEED = "proceed"
    RETRY = "retry"


class InterventionPolicy:
    def __init__(self, registry: ToolRegistry, limit: int = 2):
        if limit < 0:
            raise ValueError("intervention limit must be non-negative")
        self._registry = registry
        self.limit = limit

    def decide(self, action: Action, truth: GroundTruth, counter: int) -> InterventionDecision:
        """Retry only deviant write calls, while the per-step counter is below the limit."""
        if not isinstance(action, ToolCall) or not self._registry.is_write(action.name):
            return InterventionDecision.PROCEED
        if counter >= self.limit:
            return InterventionDecision.PROCEED
        expected = {call.canonical_key() for call in truth.calls}
        if action.canonical_key() in expected:
            return InterventionDecision.PROCEED
        logger.info("intervening on deviant write", tool=action.name, counter=counter)
        return InterventionDecision.RETRY
