"""Turkish-aware case conversion and word case classification.

Turkish has two distinct i letters (dotted i/İ and dotless ı/I), so the
default Unicode case mappings are wrong for Turkish text. Every casing
operation here applies the Turkish-specific mappings first and NFC
normalization before comparing or classifying characters.
"""
from __future__ import annotations

import unicodedata
from enum import Enum


class EmptyWordError(ValueError):
    """Raised when a casing operation receives an empty word."""


class CaseClass(Enum):
    ALL_CAPS = "AllCaps"
    FIRST_CAP = "FirstCap"
    LOWER = "Lower"


# Turkish special mappings: İ -> i, I -> ı on lowering; i -> İ, ı -> I on raising.
_LOWER_MAP = {ord("İ"): "i", ord("I"): "ı"}
_UPPER_MAP = {ord("i"): "İ", ord("ı"): "I"}


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def turkish_lower(text: str) -> str:
    """Lowercase text using Turkish casing rules (İ→i, I→ı)."""
    return _nfc(text).translate(_LOWER_MAP).lower()


def turkish_upper(text: str) -> str:
    """Uppercase text using Turkish casing rules (i→İ, ı→I)."""
    return _nfc(text).translate(_UPPER_MAP).upper()


def classify_case(word: str) -> CaseClass:
    """Classify a word into one of the three capitalization classes.

    Words without uppercase letters (including all-digit words) are LOWER.
    A single uppercase letter classifies as FIRST_CAP rather than ALL_CAPS.
    Mixed-case words that fit no class exactly ("mcDONALD") are coerced to
    FIRST_CAP; the 3-class schema cannot represent them.
    """
    if not word:
        raise EmptyWordError("cannot classify the empty word")
    alphas = [c for c in _nfc(word) if c.isalpha()]
    uppers = [c for c in alphas if c.isupper()]
    if not uppers:
        return CaseClass.LOWER
    if len(alphas) >= 2 and len(uppers) == len(alphas):
        return CaseClass.ALL_CAPS
    return CaseClass.FIRST_CAP


def apply_case(word: str, case: CaseClass) -> str:
    """Re-case a fully lowercase word per the given class."""
    if not word:
        raise EmptyWordError("cannot apply a case to the empty word")
    if case is CaseClass.ALL_CAPS:
        return turkish_upper(word)
    if case is CaseClass.FIRST_CAP:
        chars = list(_nfc(word))
        for i, c in enumerate(chars):
            if c.isalpha():
                chars[i] = turkish_upper(c)
                break
        return "".join(chars)
    return _nfc(word)
