"""Corpus ingestion, label extraction, windowing, splitting and statistics."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Iterator, Mapping

from .labels import (
    CapTag,
    PunctLabel,
    SENTENCE_FINAL,
    cap_from_string,
    punct_from_string,
)
from .casing import CaseClass
from .tokenizer import Token, Vocab, WordUnit, pretokenize, wordpiece

_CASE_TO_TAG = {
    CaseClass.ALL_CAPS: CapTag.CAP,
    CaseClass.FIRST_CAP: CapTag.ONE,
    CaseClass.LOWER: CapTag.NON,
}


class IngestError(ValueError):
    pass


class MissingColumnError(IngestError):
    def __init__(self, column: str):
        super().__init__(f"input has no column {column!r}")
        self.column = column


class MalformedRecordError(IngestError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"record at line {line}: {reason}")
        self.line = line


def ingest(path, format: str, column: str = "content") -> Iterator[str]:
    """Yield one document string per record, preserving record order."""
    if format == "jsonl":
        yield from _ingest_jsonl(path, column)
    elif format == "csv":
        yield from _ingest_csv(path, column)
    else:
        raise IngestError(f"unknown input format {format!r}")


def _ingest_jsonl(path, column: str) -> Iterator[str]:
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecordError(line_no, f"invalid JSON: {exc}") from None
            if not isinstance(record, dict) or column not in record:
                raise MissingColumnError(column)
            value = record[column]
            if not isinstance(value, str):
                raise MalformedRecordError(line_no, f"column {column!r} is not a string")
            yield value


def _ingest_csv(path, column: str) -> Iterator[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise MissingColumnError(column)
        for line_no, row in enumerate(reader, start=2):
            value = row.get(column)
            if value is None:
                raise MalformedRecordError(line_no, f"column {column!r} missing or null")
            yield value


@dataclass
class DocumentPayload:
    """A whole document's token stream with aligned labels."""

    doc_id: str
    units: list[WordUnit]
    tokens: list[Token]
    punct: list[PunctLabel]
    caps: list[CapTag]


@dataclass
class LabeledSegment:
    """A window of at most max_len tokens with parallel label sequences.

    token_offset is the index of the first token within the source
    document's token stream; it is in-memory bookkeeping (used for
    overlap deduplication and window merging) and is not serialized.
    """

    doc_id: str
    tokens: list[Token]
    punct: list[PunctLabel]
    caps: list[CapTag]
    source_span: tuple[int, int] = (0, 0)
    token_offset: int = 0

    def __len__(self) -> int:
        return len(self.tokens)


def extract_labels(
    units: Iterable[WordUnit], vocab: Vocab
) -> tuple[list[Token], list[PunctLabel], list[CapTag]]:
    """Tokenize word units and derive the two self-supervised label rows.

    The unit's trailing punctuation labels its last subtoken; its original
    case labels its first subtoken; everything else is non.
    """
    tokens: list[Token] = []
    punct: list[PunctLabel] = []
    caps: list[CapTag] = []
    for word_index, unit in enumerate(units):
        pieces = wordpiece(unit.text, vocab, word_index=word_index)
        if not pieces:
            continue
        for k, tok in enumerate(pieces):
            tokens.append(tok)
            punct.append(unit.trailing_punct if k == len(pieces) - 1 else PunctLabel.NONE)
            caps.append(_CASE_TO_TAG[unit.original_case] if k == 0 else CapTag.NON)
    return tokens, punct, caps


def extract_document(doc_id: str, text: str, vocab: Vocab) -> DocumentPayload:
    units = pretokenize(text)
    tokens, punct, caps = extract_labels(units, vocab)
    return DocumentPayload(doc_id=doc_id, units=units, tokens=tokens, punct=punct, caps=caps)


def _segment_span(payload: DocumentPayload, start: int, end: int) -> tuple[int, int]:
    if not payload.units or end <= start:
        return (0, 0)
    first_unit = payload.units[payload.tokens[start].word_index]
    last_unit = payload.units[payload.tokens[end - 1].word_index]
    return (first_unit.char_span[0], last_unit.char_span[1])


def segment(payload: DocumentPayload, max_len: int = 512) -> list[LabeledSegment]:
    """Divide a document into ≤max_len windows.

    The first window starts at token 0; each following window starts right
    after the last sentence-final mark (. ! ; ?) of the previous window.
    A window with no such mark falls back to a hard cut at max_len.
    """
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    n = len(payload.tokens)
    if n == 0:
        return []
    segments: list[LabeledSegment] = []
    start = 0
    while True:
        end = min(start + max_len, n)
        segments.append(
            LabeledSegment(
                doc_id=payload.doc_id,
                tokens=payload.tokens[start:end],
                punct=payload.punct[start:end],
                caps=payload.caps[start:end],
                source_span=_segment_span(payload, start, end),
                token_offset=start,
            )
        )
        if end >= n:
            break
        restart = None
        for p in range(end - 1, start - 1, -1):
            if payload.punct[p] in SENTENCE_FINAL:
                restart = p + 1
                break
        start = restart if restart is not None and restart > start else end
    return segments


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic train/test/validation split specification."""

    train_frac: Fraction = Fraction(7, 10)
    test_frac: Fraction = Fraction(1, 5)
    valid_frac: Fraction = Fraction(1, 10)
    seed: int = 0

    def __post_init__(self):
        for name in ("train_frac", "test_frac", "valid_frac"):
            frac = getattr(self, name)
            if not isinstance(frac, Fraction):
                object.__setattr__(self, name, Fraction(str(frac)))
        for name in ("train_frac", "test_frac", "valid_frac"):
            frac = getattr(self, name)
            if frac < 0 or frac > 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        total = self.train_frac + self.test_frac + self.valid_frac
        if total != 1:
            raise ValueError(f"split fractions must sum to 1, got {total}")


_MASK64 = (1 << 64) - 1


def _xorshift64star(seed: int) -> Iterator[int]:
    """xorshift64* stream; fully specified so splits reproduce anywhere."""
    x = (seed & _MASK64) or 0x9E3779B97F4A7C15
    while True:
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        yield (x * 0x2545F4914F6CDD1D) & _MASK64


def _seeded_shuffle(items: list, seed: int) -> list:
    out = list(items)
    rng = _xorshift64star(seed)
    for i in range(len(out) - 1, 0, -1):
        j = next(rng) % (i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def split_dataset(docs: Iterable[str], spec: SplitSpec) -> tuple[list[str], list[str], list[str]]:
    """Shuffle documents by seed, then cut at the split fractions."""
    shuffled = _seeded_shuffle(list(docs), spec.seed)
    n = len(shuffled)
    cut1 = int(spec.train_frac * n)
    cut2 = int((spec.train_frac + spec.test_frac) * n)
    return shuffled[:cut1], shuffled[cut1:cut2], shuffled[cut2:]


DistributionTable = dict  # split name -> {punct char -> count}


def distribution(segments_per_split: Mapping[str, Iterable[LabeledSegment]]) -> DistributionTable:
    """Count punctuation labels per split, once per source token position.

    Tokens re-covered by overlapping windows (segmentation restart rule)
    are deduplicated by (doc_id, source token index).
    """
    table: DistributionTable = {}
    for split_name, segments in segments_per_split.items():
        counts = {label.char: 0 for label in PunctLabel if label is not PunctLabel.NONE}
        seen: set[tuple[str, int]] = set()
        for seg in segments:
            for i, label in enumerate(seg.punct):
                if label is PunctLabel.NONE:
                    continue
                pos = (seg.doc_id, seg.token_offset + i)
                if pos in seen:
                    continue
                seen.add(pos)
                counts[label.char] += 1
        table[split_name] = counts
    return table


def prepare_inference(text: str, vocab: Vocab, max_len: int = 512) -> list[LabeledSegment]:
    """Window raw input for prediction: punctuation stripped, all labels blank.

    Gold punctuation cannot drive window restarts at inference, so windows
    overlap with stride max_len/2 instead.
    """
    payload = extract_document("input", text, vocab)
    return inference_windows(payload, max_len)


def inference_windows(payload: DocumentPayload, max_len: int = 512) -> list[LabeledSegment]:
    """Blank-label windows with stride max_len/2 over an extracted document."""
    n = len(payload.tokens)
    if n == 0:
        return []
    stride = max(1, max_len // 2)
    starts = [0]
    while starts[-1] + max_len < n:
        starts.append(starts[-1] + stride)
    windows = []
    for s in starts:
        e = min(s + max_len, n)
        windows.append(
            LabeledSegment(
                doc_id=payload.doc_id,
                tokens=payload.tokens[s:e],
                punct=[PunctLabel.NONE] * (e - s),
                caps=[CapTag.NON] * (e - s),
                source_span=_segment_span(payload, s, e),
                token_offset=s,
            )
        )
    return windows


def merge_window_predictions(
    windows: list[LabeledSegment],
    predictions: list[tuple[list[PunctLabel], list[CapTag]]],
    n_tokens: int,
) -> tuple[list[PunctLabel], list[CapTag]]:
    """Merge overlapping window predictions back onto the source stream.

    Each source token takes its label from the window where it sits
    farthest from a window edge; ties go to the earlier window.
    """
    punct: list[PunctLabel] = [PunctLabel.NONE] * n_tokens
    caps: list[CapTag] = [CapTag.NON] * n_tokens
    best = [-1] * n_tokens
    for window, (p_row, c_row) in zip(windows, predictions):
        s = window.token_offset
        e = s + len(window)
        for i in range(s, e):
            margin = min(i - s, e - 1 - i)
            if margin > best[i]:
                best[i] = margin
                punct[i] = p_row[i - s]
                caps[i] = c_row[i - s]
    return punct, caps


def write_segments(segments: Iterable[LabeledSegment], fh: IO[str]) -> int:
    """Write segments as JSON-lines with the fixed key order."""
    count = 0
    for seg in segments:
        record = {
            "doc_id": seg.doc_id,
            "tokens": [t.surface for t in seg.tokens],
            "punct": [p.value for p in seg.punct],
            "caps": [c.value for c in seg.caps],
        }
        fh.write(json.dumps(record, ensure_ascii=False))
        fh.write("\n")
        count += 1
    return count


def read_segments(fh: IO[str], vocab: Vocab) -> list[LabeledSegment]:
    """Read segments back from JSON-lines; word indices are re-derived."""
    segments = []
    for line_no, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(line_no, f"invalid JSON: {exc}") from None
        surfaces = record["tokens"]
        tokens: list[Token] = []
        word_index = -1
        for surface in surfaces:
            is_cont = surface.startswith(vocab.continuation_prefix)
            if not is_cont or word_index < 0:
                word_index += 1
            tokens.append(Token(surface, is_cont, vocab.id_of(surface), word_index))
        punct = [punct_from_string(v) for v in record["punct"]]
        caps = [cap_from_string(v) for v in record["caps"]]
        if not (len(tokens) == len(punct) == len(caps)):
            raise MalformedRecordError(line_no, "token/label rows differ in length")
        segments.append(
            LabeledSegment(doc_id=record["doc_id"], tokens=tokens, punct=punct, caps=caps)
        )
    return segments
