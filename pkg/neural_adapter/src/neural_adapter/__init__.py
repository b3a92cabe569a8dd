"""Transformer token-classification backend for punctuation and
capitalization restoration, trained on the core toolkit's JSONL segment
format and served over its JSON-lines wire protocol."""
from .data import (
    CAP_LABELS,
    PUNCT_LABELS,
    SchemaError,
    Segment,
    TokenVocab,
    read_segments,
)
from .model import ARCHITECTURES, ArchSpec, build_model
from .serve import AdapterServer
from .train import Checkpoint, TrainConfig, TrainResult, finetune, macro_f1

__version__ = "0.1.0"

__all__ = [
    "ARCHITECTURES",
    "AdapterServer",
    "ArchSpec",
    "CAP_LABELS",
    "Checkpoint",
    "PUNCT_LABELS",
    "SchemaError",
    "Segment",
    "TokenVocab",
    "TrainConfig",
    "TrainResult",
    "build_model",
    "finetune",
    "macro_f1",
    "read_segments",
]
