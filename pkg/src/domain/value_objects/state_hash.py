"""
Value Object for store digests.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class StateHash:
    """Fixed-length SHA-256 digest over a canonicalized entity store."""

    digest: bytes

    def __post_init__(self) -> None:
        if len(self.digest) != 32:
            raise ValueError("StateHash digest must be 32 bytes")

    @property
    def hex(self) -> str:
        return self.digest.hex()

    def __str__(self) -> str:
        return self.hex
