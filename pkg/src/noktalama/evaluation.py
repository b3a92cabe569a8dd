"""Per-class precision/recall/F1, confusion matrices, and benchmarks."""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .labels import CAP_ALPHABET, CapTag, PUNCT_ALPHABET, PunctLabel
from .pipeline import LabeledSegment
from .tagger import TaggerBackend


class LengthMismatchError(ValueError):
    def __init__(self, index: int, gold: int, pred: int):
        super().__init__(f"sequence {index}: gold has {gold} labels, prediction has {pred}")
        self.index = index


class UnknownClassError(KeyError):
    pass


@dataclass
class ConfusionMatrix:
    """cells[g][p] counts gold label g predicted as p."""

    labels: list
    cells: list[list[int]]

    @classmethod
    def zeros(cls, labels: Sequence) -> "ConfusionMatrix":
        n = len(labels)
        return cls(labels=list(labels), cells=[[0] * n for _ in range(n)])

    def index_of(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownClassError(label) from None

    def add(self, gold, pred) -> None:
        self.cells[self.index_of(gold)][self.index_of(pred)] += 1

    def merge(self, other: "ConfusionMatrix") -> None:
        for g in range(len(self.labels)):
            for p in range(len(self.labels)):
                self.cells[g][p] += other.cells[g][p]

    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def support(self, label) -> int:
        return sum(self.cells[self.index_of(label)])

    def write_csv(self, fh: IO[str]) -> None:
        """Gold rows, predicted columns, label names on both axes."""
        writer = csv.writer(fh, lineterminator="\n")
        names = [l.value for l in self.labels]
        writer.writerow(["gold\\pred"] + names)
        for name, row in zip(names, self.cells):
            writer.writerow([name] + row)


def confusion(
    gold: Sequence[Sequence], pred: Sequence[Sequence], labels: Sequence
) -> ConfusionMatrix:
    """Build a confusion matrix from parallel gold/predicted sequences."""
    matrix = ConfusionMatrix.zeros(labels)
    for index, (g_row, p_row) in enumerate(zip(gold, pred)):
        if len(g_row) != len(p_row):
            raise LengthMismatchError(index, len(g_row), len(p_row))
        for g, p in zip(g_row, p_row):
            matrix.add(g, p)
    return matrix


def precision_recall_f1(matrix: ConfusionMatrix, label) -> tuple[float, float, float]:
    """Per-class metrics; any zero denominator yields 0 by convention."""
    i = matrix.index_of(label)
    tp = matrix.cells[i][i]
    fp = sum(matrix.cells[g][i] for g in range(len(matrix.labels))) - tp
    fn = sum(matrix.cells[i]) - tp
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvalReport:
    """Per-class and aggregate metrics for one task."""

    task: str
    per_class: dict = field(default_factory=dict)  # label -> ClassMetrics
    macro_f1: float = 0.0     # over non-null classes
    micro_f1: float = 0.0     # pooled over all positions (== accuracy)
    weighted_f1: float = 0.0  # support-weighted over supported classes
    confusion: ConfusionMatrix | None = None

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "per_class": {
                label.value: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for label, m in self.per_class.items()
            },
            "macro_f1": self.macro_f1,
            "micro_f1": self.micro_f1,
            "weighted_f1": self.weighted_f1,
        }

    def table(self) -> str:
        """Human-readable aligned metrics table."""
        width = max(len(l.value) for l in self.per_class) + 2
        lines = [f"task: {self.task}"]
        header = f"{'class':<{width}}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}"
        lines.append(header)
        lines.append("-" * len(header))
        for label, m in self.per_class.items():
            lines.append(
                f"{label.value:<{width}}{m.precision:>10.4f}{m.recall:>10.4f}"
                f"{m.f1:>10.4f}{m.support:>10d}"
            )
        lines.append("-" * len(header))
        lines.append(f"macro F1 (non-null): {self.macro_f1:.4f}")
        lines.append(f"micro F1:            {self.micro_f1:.4f}")
        lines.append(f"weighted F1:         {self.weighted_f1:.4f}")
        return "\n".join(lines)


def summarize(matrix: ConfusionMatrix, task: str, null_label) -> EvalReport:
    report = EvalReport(task=task, confusion=matrix)
    total = matrix.total()
    correct = sum(matrix.cells[i][i] for i in range(len(matrix.labels)))
    macro_classes = []
    weighted_sum = 0.0
    weighted_support = 0
    for label in matrix.labels:
        p, r, f1 = precision_recall_f1(matrix, label)
        support = matrix.support(label)
        report.per_class[label] = ClassMetrics(p, r, f1, support)
        if label is not null_label:
            macro_classes.append(f1)
        if support:
            weighted_sum += f1 * support
            weighted_support += support
    report.macro_f1 = sum(macro_classes) / len(macro_classes) if macro_classes else 0.0
    report.micro_f1 = correct / total if total else 0.0
    report.weighted_f1 = weighted_sum / weighted_support if weighted_support else 0.0
    return report


def evaluate(
    backend: TaggerBackend, segments: Iterable[LabeledSegment]
) -> tuple[EvalReport, EvalReport]:
    """Run the backend over gold segments; returns (punct, caps) reports."""
    punct_matrix = ConfusionMatrix.zeros(PUNCT_ALPHABET)
    caps_matrix = ConfusionMatrix.zeros(CAP_ALPHABET)
    for seg in segments:
        pred_punct, pred_caps = backend.predict(seg.tokens)
        if len(pred_punct) != len(seg.punct) or len(pred_caps) != len(seg.caps):
            raise LengthMismatchError(0, len(seg.punct), len(pred_punct))
        for g, p in zip(seg.punct, pred_punct):
            punct_matrix.add(g, p)
        for g, p in zip(seg.caps, pred_caps):
            caps_matrix.add(g, p)
    return (
        summarize(punct_matrix, "punct", PunctLabel.NONE),
        summarize(caps_matrix, "caps", CapTag.NON),
    )


@dataclass
class BenchReport:
    model_name: str
    n_examples: int
    wall_time: float
    per_example_ms: float
    hardware_note: str = ""

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "n_examples": self.n_examples,
            "wall_time": self.wall_time,
            "per_example_ms": self.per_example_ms,
            "hardware_note": self.hardware_note,
        }

    def table(self) -> str:
        return (
            f"model:          {self.model_name}\n"
            f"examples:       {self.n_examples}\n"
            f"wall time:      {self.wall_time:.3f} s\n"
            f"per example:    {self.per_example_ms:.3f} ms\n"
            f"hardware:       {self.hardware_note or 'unspecified'}"
        )


def bench(
    backend: TaggerBackend,
    examples: Sequence[LabeledSegment],
    n: int = 1000,
    hardware_note: str = "",
) -> BenchReport:
    """Time exactly n predictions after one warmup call, single-stream."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not examples:
        raise ValueError("need at least one example")
    backend.predict(examples[0].tokens)  # warmup
    start = time.perf_counter()
    for i in range(n):
        backend.predict(examples[i % len(examples)].tokens)
    wall = time.perf_counter() - start
    return BenchReport(
        model_name=backend.model_name,
        n_examples=n,
        wall_time=wall,
        per_example_ms=wall * 1000.0 / n,
        hardware_note=hardware_note,
    )
