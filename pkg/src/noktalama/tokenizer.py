"""Vocabulary loading, pre-tokenization and greedy WordPiece tokenization.

The pre-tokenizer splits on whitespace, then on the 8-mark punctuation
alphabet. Each punctuation mark becomes the trailing label carrier of the
word unit it follows; the marks themselves never reach the subword
tokenizer. All other symbols (quotes, parentheses, %) stay inside word
units untouched.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .casing import CaseClass, classify_case, turkish_lower
from .labels import CHAR_TO_LABEL, PunctLabel

DEFAULT_UNK = "[UNK]"
DEFAULT_CONTINUATION = "##"
MAX_CHARS_PER_WORD = 100

_WS_TOKEN = re.compile(r"\S+")


class VocabError(ValueError):
    pass


class DuplicateTokenError(VocabError):
    def __init__(self, token: str, line: int):
        super().__init__(f"duplicate vocabulary token {token!r} at line {line}")
        self.token = token
        self.line = line


class MissingUnkTokenError(VocabError):
    def __init__(self, unk_token: str):
        super().__init__(f"vocabulary has no unknown-token entry {unk_token!r}")
        self.unk_token = unk_token


@dataclass(frozen=True)
class Vocab:
    """Immutable WordPiece vocabulary: token string -> dense integer id."""

    entries: dict[str, int]
    unk_token: str = DEFAULT_UNK
    continuation_prefix: str = DEFAULT_CONTINUATION
    special_tokens: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.unk_token not in self.entries:
            raise MissingUnkTokenError(self.unk_token)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def id_of(self, token: str) -> int:
        return self.entries.get(token, self.entries[self.unk_token])

    @property
    def unk_id(self) -> int:
        return self.entries[self.unk_token]


def load_vocab(path, unk_token: str = DEFAULT_UNK) -> Vocab:
    """Load a one-token-per-line vocabulary file; line index = id."""
    entries: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh):
            token = line.rstrip("\r\n")
            if not token:
                continue
            if token in entries:
                raise DuplicateTokenError(token, line_no + 1)
            entries[token] = len(entries)
    specials = frozenset(t for t in entries if t.startswith("[") and t.endswith("]"))
    return Vocab(entries=entries, unk_token=unk_token, special_tokens=specials)


@dataclass
class WordUnit:
    """A lowercased, punctuation-free word piece from the source text."""

    text: str
    trailing_punct: PunctLabel = PunctLabel.NONE
    original_case: CaseClass = CaseClass.LOWER
    char_span: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Token:
    """A WordPiece subtoken tied back to its owning word unit."""

    surface: str
    is_continuation: bool
    vocab_id: int
    word_index: int


def pretokenize(text: str) -> list[WordUnit]:
    """Split text into word units, recording trailing punctuation and case.

    Only the first punctuation mark after a word is kept; consecutive marks
    and marks with no preceding word in the same whitespace token are
    dropped. Unit text is Turkish-lowercased; the original case class is
    recorded before lowering.
    """
    text = unicodedata.normalize("NFC", text)
    units: list[WordUnit] = []
    for match in _WS_TOKEN.finditer(text):
        chunk = match.group()
        base = match.start()
        i = 0
        unit_open = False  # last unit in this chunk still lacks a mark
        while i < len(chunk):
            c = chunk[i]
            if c in CHAR_TO_LABEL:
                if unit_open:
                    units[-1].trailing_punct = CHAR_TO_LABEL[c]
                    unit_open = False
                i += 1
                continue
            j = i
            while j < len(chunk) and chunk[j] not in CHAR_TO_LABEL:
                j += 1
            raw = chunk[i:j]
            units.append(
                WordUnit(
                    text=turkish_lower(raw),
                    trailing_punct=PunctLabel.NONE,
                    original_case=classify_case(raw),
                    char_span=(base + i, base + j),
                )
            )
            unit_open = True
            i = j
    return units


def wordpiece(unit_text: str, vocab: Vocab, word_index: int = 0) -> list[Token]:
    """Greedy longest-match-first WordPiece segmentation of one word unit.

    If any position has no matching vocabulary entry, the whole unit
    collapses to a single unknown token.
    """
    if not unit_text:
        return []
    if len(unit_text) > MAX_CHARS_PER_WORD:
        return [Token(vocab.unk_token, False, vocab.unk_id, word_index)]
    pieces: list[str] = []
    start = 0
    n = len(unit_text)
    while start < n:
        end = n
        found = None
        while start < end:
            piece = unit_text[start:end]
            if start > 0:
                piece = vocab.continuation_prefix + piece
            if piece in vocab:
                found = piece
                break
            end -= 1
        if found is None:
            return [Token(vocab.unk_token, False, vocab.unk_id, word_index)]
        pieces.append(found)
        start = end
    return [
        Token(
            surface=p,
            is_continuation=p.startswith(vocab.continuation_prefix),
            vocab_id=vocab.entries[p],
            word_index=word_index,
        )
        for p in pieces
    ]


def detokenize_unit(tokens: list[Token], continuation_prefix: str = DEFAULT_CONTINUATION) -> str:
    """Rejoin one unit's subtokens by stripping continuation prefixes."""
    out = []
    for tok in tokens:
        surface = tok.surface
        if tok.is_continuation and surface.startswith(continuation_prefix):
            surface = surface[len(continuation_prefix):]
        out.append(surface)
    return "".join(out)
