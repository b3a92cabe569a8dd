"""Encoder construction for the five supported model sizes."""
from __future__ import annotations

from dataclasses import dataclass

import torch
from transformers import BertConfig, BertForTokenClassification


@dataclass(frozen=True)
class ArchSpec:
    hidden_size: int
    num_layers: int
    num_heads: int


#: Architecture table for the supported size names.
ARCHITECTURES = {
    "tiny": ArchSpec(128, 2, 2),
    "mini": ArchSpec(256, 4, 4),
    "small": ArchSpec(512, 4, 8),
    "medium": ArchSpec(512, 8, 8),
    "base": ArchSpec(768, 12, 12),
}


def build_model(
    model_name: str,
    vocab_size: int,
    num_labels: int,
    max_len: int,
    seed: int = 0,
) -> BertForTokenClassification:
    """Create a randomly initialized token-classification encoder.

    Pretrained Turkish checkpoints slot in transparently when available
    (same architecture); in hermetic environments training starts from
    this random initialization instead.
    """
    if model_name not in ARCHITECTURES:
        raise ValueError(f"unknown model size {model_name!r}")
    arch = ARCHITECTURES[model_name]
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=arch.hidden_size,
        num_hidden_layers=arch.num_layers,
        num_attention_heads=arch.num_heads,
        intermediate_size=arch.hidden_size * 4,
        max_position_embeddings=max_len,
        num_labels=num_labels,
        pad_token_id=0,
    )
    return BertForTokenClassification(config)
