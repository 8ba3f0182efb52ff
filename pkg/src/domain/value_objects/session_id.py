"""
Value Object for sandbox session identifiers.

Encapsulates generation and validation of opaque session ids.
"""

import uuid
from dataclasses import dataclass


@dataclass(frozen=True)
class SessionId:
    """
    Unique identifier of a sandbox episode session.

    Immutable, compared by value.
    """

    value: str

    @classmethod
    def generate(cls) -> "SessionId":
        """Generate a new unique session ID."""
        return cls(value=str(uuid.uuid4()))

    @classmethod
    def from_string(cls, value: str) -> "SessionId":
        """
        Build a SessionId from its string form.

        Raises:
            ValueError: If the string is empty or not a UUID
        """
        if not value or not value.strip():
            raise ValueError("SessionId cannot be empty")

        try:
            uuid.UUID(value.strip())
        except ValueError:
            raise ValueError(f"Invalid UUID format: {value}")

        return cls(value=value.strip())

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"SessionId(value='{self.value}')"
