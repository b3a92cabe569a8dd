"""Fine-tuning loop: AdamW, linear schedule, optional gradient clipping."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch.optim import AdamW
from transformers import BertForTokenClassification, get_linear_schedule_with_warmup

from .data import (
    IGNORE_INDEX,
    Segment,
    TASK_LABELS,
    TokenVocab,
    batched,
    encode_batch,
)
from .model import ARCHITECTURES, build_model


@dataclass
class TrainConfig:
    model_name: str = "tiny"
    task: str = "punct"
    learning_rate: float = 4e-4
    batch_size: int = 32
    max_grad_norm: float | None = None
    epochs: int = 3
    seed: int = 0
    max_len: int = 128
    warmup_steps: int = 0

    def validate(self) -> None:
        if self.model_name not in ARCHITECTURES:
            raise ValueError(f"unknown model size {self.model_name!r}")
        if self.task not in TASK_LABELS:
            raise ValueError(f"task must be one of {sorted(TASK_LABELS)}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")


@dataclass
class TrainResult:
    epoch_losses: list[float] = field(default_factory=list)
    valid_f1: list[float] = field(default_factory=list)


def macro_f1(gold: list[str], pred: list[str], labels: list[str], null_label: str) -> float:
    """Mean F1 over the non-null classes (zero-denominator terms are 0)."""
    scores = []
    for cls in labels:
        if cls == null_label:
            continue
        tp = sum(1 for g, p in zip(gold, pred) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold, pred) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold, pred) if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        scores.append(
            2 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
    return sum(scores) / len(scores) if scores else 0.0


def _evaluate_f1(
    model: BertForTokenClassification,
    segments: list[Segment],
    vocab: TokenVocab,
    config: TrainConfig,
) -> float:
    labels = TASK_LABELS[config.task]
    gold: list[str] = []
    pred: list[str] = []
    model.eval()
    with torch.no_grad():
        for batch in batched(segments, config.batch_size):
            ids, mask, gold_ids = encode_batch(batch, vocab, config.task, config.max_len)
            logits = model(input_ids=ids, attention_mask=mask).logits
            choice = logits.argmax(dim=-1)
            keep = gold_ids != IGNORE_INDEX
            gold.extend(labels[i] for i in gold_ids[keep].tolist())
            pred.extend(labels[i] for i in choice[keep].tolist())
    return macro_f1(gold, pred, labels, "non")


def finetune(
    train_segments: list[Segment],
    valid_segments: list[Segment],
    config: TrainConfig,
    output_dir: str | Path,
    metrics_log: str | Path | None = None,
) -> TrainResult:
    """Train a token-classification head; returns per-epoch training losses.

    Writes a checkpoint directory (model weights + token vocabulary +
    task metadata) and, when requested, a JSONL metrics log with one
    {epoch, split, task, f1} object per evaluation. Training rows carry
    the epoch-mean loss as well.
    """
    config.validate()
    if not train_segments:
        raise ValueError("training set is empty")
    torch.manual_seed(config.seed)
    vocab = TokenVocab.build(train_segments)
    labels = TASK_LABELS[config.task]
    model = build_model(
        config.model_name, len(vocab), len(labels), config.max_len, config.seed
    )
    batches = batched(train_segments, config.batch_size)
    optimizer = AdamW(model.parameters(), lr=config.learning_rate)
    scheduler = get_linear_schedule_with_warmup(
        optimizer, config.warmup_steps, len(batches) * config.epochs
    )
    result = TrainResult()
    log_rows: list[dict] = []
    for epoch in range(1, config.epochs + 1):
        model.train()
        total_loss = 0.0
        for batch in batches:
            ids, mask, gold = encode_batch(batch, vocab, config.task, config.max_len)
            optimizer.zero_grad()
            loss = model(input_ids=ids, attention_mask=mask, labels=gold).loss
            loss.backward()
            if config.max_grad_norm is not None:
                torch.nn.utils.clip_grad_norm_(model.parameters(), config.max_grad_norm)
            optimizer.step()
            scheduler.step()
            total_loss += loss.item()
        epoch_loss = total_loss / len(batches)
        result.epoch_losses.append(epoch_loss)
        train_f1 = _evaluate_f1(model, train_segments, vocab, config)
        log_rows.append({
            "epoch": epoch, "split": "train", "task": config.task,
            "f1": train_f1, "loss": epoch_loss,
        })
        if valid_segments:
            f1 = _evaluate_f1(model, valid_segments, vocab, config)
            result.valid_f1.append(f1)
            log_rows.append(
                {"epoch": epoch, "split": "valid", "task": config.task, "f1": f1}
            )
    save_checkpoint(model, vocab, config, output_dir)
    if metrics_log is not None:
        with open(metrics_log, "a", encoding="utf-8") as fh:
            for row in log_rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return result


def save_checkpoint(
    model: BertForTokenClassification,
    vocab: TokenVocab,
    config: TrainConfig,
    output_dir: str | Path,
) -> None:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    (out / "token_vocab.json").write_text(vocab.to_json(), encoding="utf-8")
    meta = {
        "model_name": config.model_name,
        "task": config.task,
        "max_len": config.max_len,
        "labels": TASK_LABELS[config.task],
    }
    (out / "adapter.json").write_text(
        json.dumps(meta, ensure_ascii=False, indent=2), encoding="utf-8"
    )


class Checkpoint:
    """A loaded task model ready for inference."""

    def __init__(self, model, vocab: TokenVocab, task: str, max_len: int):
        self.model = model
        self.vocab = vocab
        self.task = task
        self.max_len = max_len
        self.labels = TASK_LABELS[task]
        self.model.eval()

    @classmethod
    def load(cls, path: str | Path) -> "Checkpoint":
        path = Path(path)
        meta = json.loads((path / "adapter.json").read_text(encoding="utf-8"))
        vocab = TokenVocab.from_json(
            (path / "token_vocab.json").read_text(encoding="utf-8")
        )
        model = BertForTokenClassification.from_pretrained(path)
        return cls(model, vocab, meta["task"], meta["max_len"])

    def predict(self, surfaces: list[str]) -> list[str]:
        """One label per input token; input longer than max_len is an error."""
        if len(surfaces) > self.max_len:
            raise ValueError(f"length exceeded: {len(surfaces)} > {self.max_len}")
        if not surfaces:
            return []
        ids = torch.tensor([self.vocab.encode(surfaces)], dtype=torch.long)
        mask = torch.ones_like(ids)
        with torch.no_grad():
            logits = self.model(input_ids=ids, attention_mask=mask).logits
        return [self.labels[i] for i in logits.argmax(dim=-1)[0].tolist()]
