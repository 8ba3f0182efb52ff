"""
Domain exceptions.

Defines domain-specific exceptions for the retail sandbox, the trajectory
model and the reward / advantage math.
"""

from typing import Optional


class DomainException(Exception):
    """Base exception for domain errors."""

    def __init__(self, message: str, error_code: str = "DOMAIN_ERROR"):
        self.message = message
        self.error_code = error_code
        super().__init__(message)


class SeedValidationError(DomainException):
    """Seed document does not match the seed schema."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"Invalid seed at {path}: {reason}", "SEED_SCHEMA_VIOLATION")
        self.path = path


class DanglingReferenceError(DomainException):
    """Seed document references entities that do not exist."""

    def __init__(self, entity_ids: list[str], reason: str):
        joined = ", ".join(entity_ids)
        super().__init__(f"Dangling reference ({reason}): {joined}", "DANGLING_REFERENCE")
        self.entity_ids = entity_ids


class UnknownToolError(DomainException):
    """Tool name is not registered."""

    def __init__(self, name: str):
        super().__init__(f"Unknown tool: {name}", "UNKNOWN_TOOL")
        self.name = name


class ToolArgumentError(DomainException):
    """Tool call arguments do not validate against the tool schema."""

    def __init__(self, tool: str, path: str, reason: str):
        super().__init__(f"Invalid arguments for {tool} at '{path}': {reason}", "INVALID_ARGUMENTS")
        self.tool = tool
        self.path = path


class ReactParseError(DomainException):
    """Agent output could not be parsed into a thought and an action."""

    def __init__(self, reason: str, span: tuple[int, int], fragment: str = ""):
        super().__init__(f"Malformed action {span}: {reason}", "REACT_PARSE_ERROR")
        self.span = span
        self.fragment = fragment


class TrajectoryDecodeError(DomainException):
    """A trajectory record line could not be decoded."""

    def __init__(self, line_number: int, reason: str, offset: Optional[int] = None):
        where = f"line {line_number}" if offset is None else f"line {line_number}, byte {offset}"
        super().__init__(f"Malformed trajectory record at {where}: {reason}", "RECORD_DECODE_ERROR")
        self.line_number = line_number
        self.offset = offset


class PreconditionViolation(DomainException):
    """An operation was called outside its precondition."""

    def __init__(self, message: str):
        super().__init__(message, "PRECONDITION_VIOLATION")


class RewardConstraintError(DomainException):
    """Turn scores violate the TARL constraints."""

    def __init__(self, message: str):
        super().__init__(f"Reward constraint violated: {message}", "REWARD_CONSTRAINT")


class AdvantageInputError(DomainException):
    """Advantage-engine inputs are misaligned or the group is too small."""

    def __init__(self, message: str):
        super().__init__(message, "ADVANTAGE_INPUT_ERROR")


class PassKError(DomainException):
    """pass^k requested for k larger than the available rollouts."""

    def __init__(self, message: str):
        super().__init__(message, "PASS_K_ERROR")


class EmptyPoolError(DomainException):
    """Task mixer has an empty pool for a scheduled tag."""

    def __init__(self, tag: str):
        super().__init__(f"Task pool is empty for tag: {tag}", "EMPTY_POOL")
        self.tag = tag


class AdjudicationError(DomainException):
    """Judge output is not a valid turn-score object."""

    def __init__(self, message: str, raw: str = ""):
        super().__init__(f"Invalid judge output: {message}", "ADJUDICATION_ERROR")
        self.raw = raw
