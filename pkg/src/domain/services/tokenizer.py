"""
Pluggable tokenization.

Token counts, loss masks and per-turn lengths are all parameterized by the
tokenizer; the default splits words and individual punctuation marks.
"""

import re
from typing import Protocol

SPEECH_TOKEN = "<|speech|>"


class Tokenizer(Protocol):
    def tokenize(self, text: str) -> list[str]: ...


class RegexTokenizer:
    """Deterministic whitespace-plus-punctuation tokenizer."""

    _pattern = re.compile(r"\w+|[^\w\s]")

    def tokenize(self, text: str) -> list[str]:
        return self._pattern.findall(text)


DEFAULT_TOKENIZER = RegexTokenizer()


def speech_placeholders(transcript: str, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> list[str]:
    """One placeholder per transcript token, at least one."""
    return [SPEECH_TOKEN] * max(1, len(tokenizer.tokenize(transcript)))
