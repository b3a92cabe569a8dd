"""Turning (tokens, punct labels, cap labels) back into readable text.

Also defines the canonical text form under which round-trip equality is
checked: single spaces, punctuation attached to the preceding word, and
every word's case coerced to its 3-class representative.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .casing import CaseClass, apply_case, classify_case, turkish_lower
from .labels import CHAR_TO_LABEL, CapTag, PunctLabel
from .tokenizer import DEFAULT_CONTINUATION, Token

_TAG_TO_CASE = {
    CapTag.CAP: CaseClass.ALL_CAPS,
    CapTag.ONE: CaseClass.FIRST_CAP,
    CapTag.NON: CaseClass.LOWER,
}


class ReconstructionError(ValueError):
    pass


class LengthMismatchError(ReconstructionError):
    pass


class DanglingContinuationError(ReconstructionError):
    pass


def _default_spacing() -> dict[PunctLabel, bool]:
    spacing = {label: True for label in PunctLabel}
    spacing[PunctLabel.APOSTROPHE] = False
    return spacing


@dataclass
class RenderPolicy:
    """Spacing rules applied when rendering label sequences as text."""

    space_after_punct: dict[PunctLabel, bool] = field(default_factory=_default_spacing)
    join_after_apostrophe: bool = True

    def separator_after(self, punct: PunctLabel) -> str:
        if punct is PunctLabel.NONE:
            return " "
        if punct is PunctLabel.APOSTROPHE and self.join_after_apostrophe:
            return ""
        return " " if self.space_after_punct.get(punct, True) else ""


DEFAULT_POLICY = RenderPolicy()


def _render_words(words: list[tuple[str, PunctLabel]], policy: RenderPolicy) -> str:
    out = []
    for k, (word, punct) in enumerate(words):
        out.append(word)
        if punct is not PunctLabel.NONE:
            out.append(punct.char)
        if k < len(words) - 1:
            out.append(policy.separator_after(punct))
    return "".join(out)


def reconstruct(
    tokens: list[Token],
    punct: list[PunctLabel],
    caps: list[CapTag],
    policy: RenderPolicy = DEFAULT_POLICY,
    strict: bool = False,
) -> str:
    """Merge subtokens into cased, punctuated words and render them.

    Continuation tokens join their word with the prefix stripped; a
    non-NONE punctuation label on an inner token (an apostrophe predicted
    inside a merged word) is inserted at that position. The word's case
    comes from its first token's cap label, its trailing mark from its
    last token's punct label.
    """
    if not (len(tokens) == len(punct) == len(caps)):
        raise LengthMismatchError(
            f"parallel lengths differ: {len(tokens)}/{len(punct)}/{len(caps)}"
        )
    words: list[tuple[str, PunctLabel]] = []
    i = 0
    n = len(tokens)
    while i < n:
        if tokens[i].is_continuation and strict:
            raise DanglingContinuationError(
                f"segment starts mid-word at token {i} ({tokens[i].surface!r})"
            )
        cap = caps[i]
        parts = [_strip(tokens[i].surface)]
        last_punct = punct[i]
        i += 1
        while i < n and tokens[i].is_continuation:
            if last_punct is not PunctLabel.NONE:
                parts.append(last_punct.char)
            parts.append(_strip(tokens[i].surface))
            last_punct = punct[i]
            i += 1
        word = "".join(parts)
        if word:
            word = apply_case(word, _TAG_TO_CASE[cap])
        words.append((word, last_punct))
    return _render_words(words, policy)


def _strip(surface: str) -> str:
    if surface.startswith(DEFAULT_CONTINUATION):
        return surface[len(DEFAULT_CONTINUATION):]
    return surface


def canonicalize(text: str, policy: RenderPolicy = DEFAULT_POLICY) -> str:
    """Normalize text to the canonical comparison form.

    Whitespace collapses to single spaces, each of the 8 punctuation marks
    attaches to the nearest preceding word (at most one mark per word,
    extras dropped), and each word's case is coerced to its class
    representative. Marks outside the alphabet stay inside words as
    literal characters. Idempotent.
    """
    text = unicodedata.normalize("NFC", text)
    words: list[list] = []  # [rendered word, PunctLabel]
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in CHAR_TO_LABEL:
            if words and words[-1][1] is PunctLabel.NONE:
                words[-1][1] = CHAR_TO_LABEL[c]
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in CHAR_TO_LABEL:
            j += 1
        raw = text[i:j]
        coerced = apply_case(turkish_lower(raw), classify_case(raw))
        words.append([coerced, PunctLabel.NONE])
        i = j
    return _render_words([(w, p) for w, p in words], policy)
