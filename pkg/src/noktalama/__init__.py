"""Turkish punctuation and capitalization restoration toolkit."""

from .casing import CaseClass, apply_case, classify_case, turkish_lower, turkish_upper
from .labels import CapTag, PunctLabel
from .pipeline import (
    LabeledSegment,
    SplitSpec,
    distribution,
    extract_document,
    extract_labels,
    ingest,
    prepare_inference,
    segment,
    split_dataset,
)
from .reconstruct import RenderPolicy, canonicalize, reconstruct
from .restore import correct_text
from .tagger import BaselineModel, MODEL_SPECS, ModelSpec, train_baseline
from .tokenizer import Token, Vocab, WordUnit, load_vocab, pretokenize, wordpiece

__version__ = "0.1.0"

__all__ = [
    "BaselineModel",
    "CapTag",
    "CaseClass",
    "LabeledSegment",
    "MODEL_SPECS",
    "ModelSpec",
    "PunctLabel",
    "RenderPolicy",
    "SplitSpec",
    "Token",
    "Vocab",
    "WordUnit",
    "apply_case",
    "canonicalize",
    "classify_case",
    "correct_text",
    "distribution",
    "extract_document",
    "extract_labels",
    "ingest",
    "load_vocab",
    "prepare_inference",
    "pretokenize",
    "reconstruct",
    "segment",
    "split_dataset",
    "train_baseline",
    "turkish_lower",
    "turkish_upper",
    "wordpiece",
]
