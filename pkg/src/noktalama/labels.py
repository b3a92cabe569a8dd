"""Closed label alphabets for the punctuation and capitalization tasks."""
from __future__ import annotations

from enum import Enum


class PunctLabel(Enum):
    """Punctuation mark following a token, or NONE.

    Declaration order is the canonical alphabet order used for
    deterministic tie-breaking.
    """

    PERIOD = "period"
    COMMA = "comma"
    EXCLAMATION = "exclamation"
    QUESTION = "question"
    SEMICOLON = "semicolon"
    COLON = "colon"
    HYPHEN = "hyphen"
    APOSTROPHE = "apostrophe"
    NONE = "non"

    @property
    def char(self) -> str | None:
        """The literal punctuation character, or None for NONE."""
        return _LABEL_TO_CHAR.get(self)


class CapTag(Enum):
    """Capitalization class of the word a token starts."""

    ONE = "One"   # first letter uppercase
    CAP = "Cap"   # all letters uppercase
    NON = "non"   # all lowercase


PUNCT_ALPHABET = [
    PunctLabel.PERIOD,
    PunctLabel.COMMA,
    PunctLabel.EXCLAMATION,
    PunctLabel.QUESTION,
    PunctLabel.SEMICOLON,
    PunctLabel.COLON,
    PunctLabel.HYPHEN,
    PunctLabel.APOSTROPHE,
    PunctLabel.NONE,
]

CAP_ALPHABET = [CapTag.ONE, CapTag.CAP, CapTag.NON]

CHAR_TO_LABEL = {
    ".": PunctLabel.PERIOD,
    ",": PunctLabel.COMMA,
    "!": PunctLabel.EXCLAMATION,
    "?": PunctLabel.QUESTION,
    ";": PunctLabel.SEMICOLON,
    ":": PunctLabel.COLON,
    "-": PunctLabel.HYPHEN,
    "'": PunctLabel.APOSTROPHE,
}

_LABEL_TO_CHAR = {label: char for char, label in CHAR_TO_LABEL.items()}

#: Marks after which a new segment may restart.
SENTENCE_FINAL = frozenset(
    {PunctLabel.PERIOD, PunctLabel.EXCLAMATION, PunctLabel.SEMICOLON, PunctLabel.QUESTION}
)


def punct_from_string(value: str) -> PunctLabel:
    try:
        return PunctLabel(value)
    except ValueError:
        raise ValueError(f"unknown punctuation label: {value!r}") from None


def cap_from_string(value: str) -> CapTag:
    try:
        return CapTag(value)
    except ValueError:
        raise ValueError(f"unknown capitalization label: {value!r}") from None
