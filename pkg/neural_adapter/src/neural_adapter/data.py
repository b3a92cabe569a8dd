"""Reading labeled segments and turning them into padded tensors.

The input is the JSON-lines format produced by the core toolkit's
`prepare` command: one object per line with keys doc_id, tokens, punct
and caps, where the three sequences have equal length and the labels
come from two closed alphabets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import torch

#: Punctuation label alphabet, in canonical order. "non" is the null class.
PUNCT_LABELS = [
    "period", "comma", "exclamation", "question", "semicolon",
    "colon", "hyphen", "apostrophe", "non",
]

#: Capitalization label alphabet, in canonical order.
CAP_LABELS = ["One", "Cap", "non"]

TASK_LABELS = {"punct": PUNCT_LABELS, "caps": CAP_LABELS}

PAD_TOKEN = "[PAD]"
UNK_TOKEN = "[UNK]"

#: Loss mask value understood by torch's cross entropy.
IGNORE_INDEX = -100


class SchemaError(ValueError):
    """The segment file does not match the expected JSONL schema."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"segment line {line}: {reason}")
        self.line = line


@dataclass
class Segment:
    doc_id: str
    tokens: list[str]
    punct: list[str]
    caps: list[str]

    def labels(self, task: str) -> list[str]:
        return self.punct if task == "punct" else self.caps


def read_segments(path: str | Path) -> list[Segment]:
    """Load and validate a labeled segment file; bad schema aborts."""
    segments: list[Segment] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, f"invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise SchemaError(line_no, "expected a JSON object")
            missing = {"doc_id", "tokens", "punct", "caps"} - record.keys()
            if missing:
                raise SchemaError(line_no, f"missing keys: {sorted(missing)}")
            tokens, punct, caps = record["tokens"], record["punct"], record["caps"]
            if not (len(tokens) == len(punct) == len(caps)):
                raise SchemaError(line_no, "token/label rows differ in length")
            bad_punct = set(punct) - set(PUNCT_LABELS)
            bad_caps = set(caps) - set(CAP_LABELS)
            if bad_punct or bad_caps:
                raise SchemaError(
                    line_no, f"labels outside alphabet: {sorted(bad_punct | bad_caps)}"
                )
            segments.append(Segment(record["doc_id"], tokens, punct, caps))
    return segments


class TokenVocab:
    """Surface-form vocabulary built from the training segments.

    Ids are stable for a given training set: [PAD] is 0, [UNK] is 1 and
    the remaining surfaces are sorted lexicographically.
    """

    def __init__(self, tokens: list[str]):
        self.tokens = list(tokens)
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if self.tokens[:2] != [PAD_TOKEN, UNK_TOKEN]:
            raise ValueError("vocabulary must start with [PAD], [UNK]")

    @classmethod
    def build(cls, segments: list[Segment]) -> "TokenVocab":
        surfaces = sorted({tok for seg in segments for tok in seg.tokens})
        return cls([PAD_TOKEN, UNK_TOKEN] + surfaces)

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, surfaces: list[str]) -> list[int]:
        unk = self.index[UNK_TOKEN]
        return [self.index.get(s, unk) for s in surfaces]

    def to_json(self) -> str:
        return json.dumps(self.tokens, ensure_ascii=False)

    @classmethod
    def from_json(cls, payload: str) -> "TokenVocab":
        return cls(json.loads(payload))


def encode_batch(
    segments: list[Segment], vocab: TokenVocab, task: str, max_len: int
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pad one batch to a rectangle of (input_ids, attention_mask, labels)."""
    label_index = {name: i for i, name in enumerate(TASK_LABELS[task])}
    width = min(max(len(seg.tokens) for seg in segments), max_len)
    ids = torch.zeros((len(segments), width), dtype=torch.long)
    mask = torch.zeros((len(segments), width), dtype=torch.long)
    labels = torch.full((len(segments), width), IGNORE_INDEX, dtype=torch.long)
    for row, seg in enumerate(segments):
        encoded = vocab.encode(seg.tokens[:width])
        ids[row, : len(encoded)] = torch.tensor(encoded, dtype=torch.long)
        mask[row, : len(encoded)] = 1
        row_labels = [label_index[l] for l in seg.labels(task)[:width]]
        labels[row, : len(row_labels)] = torch.tensor(row_labels, dtype=torch.long)
    return ids, mask, labels


def batched(items: list, batch_size: int) -> list[list]:
    return [items[i : i + batch_size] for i in range(0, len(items), batch_size)]
