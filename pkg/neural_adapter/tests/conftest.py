"""Shared fixtures: a toy corpus prepared by the core CLI, a trained
baseline for comparison, and fine-tuned adapter checkpoints.

The core toolkit is driven exclusively through its external surfaces:
the `noktalama` command line and the JSONL segment files it writes.
"""
import json
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from neural_adapter.data import read_segments
from neural_adapter.train import TrainConfig, finetune
from toylang import CUES, FILLERS, MAX_LEN, eval_json, make_sentence, run_cli


@pytest.fixture(scope="session")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("adapter")
    vocab_path = root / "vocab.txt"
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]
    words = sorted({cue.lower() for cue, _ in CUES} | set(FILLERS))
    vocab_path.write_text("\n".join(specials + words) + "\n", encoding="utf-8")

    rng = random.Random(2024)
    corpus_path = root / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for _ in range(3000):
            fh.write(json.dumps({"content": make_sentence(rng)}, ensure_ascii=False))
            fh.write("\n")

    data_dir = root / "data"
    run_cli(
        "prepare", "--input", str(corpus_path), "--output", str(data_dir),
        "--vocab", str(vocab_path), "--max-len", str(MAX_LEN), "--seed", "1",
    )

    train_path = data_dir / "train.jsonl"
    subset_path = root / "train2000.jsonl"
    lines = train_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) >= 2000, "toy corpus must yield at least 2000 train segments"
    subset_path.write_text("\n".join(lines[:2000]) + "\n", encoding="utf-8")

    return {
        "root": root,
        "vocab": vocab_path,
        "train": subset_path,
        "valid": data_dir / "validation.jsonl",
        "test": data_dir / "test.jsonl",
    }


@pytest.fixture(scope="session")
def baseline_punct_f1(workspace):
    model_path = workspace["root"] / "baseline.json"
    run_cli(
        "train-baseline", "--input", str(workspace["train"]),
        "--output", str(model_path), "--vocab", str(workspace["vocab"]),
    )
    stdout = run_cli(
        "evaluate", "--input", str(workspace["test"]), "--backend", "baseline",
        "--model-path", str(model_path), "--vocab", str(workspace["vocab"]),
        "--json",
    )
    return eval_json(stdout)["punct"]["macro_f1"]


@pytest.fixture(scope="session")
def trained(workspace):
    """Fine-tune tiny punct + caps models; returns checkpoints and logs."""
    train_segments = read_segments(workspace["train"])
    valid_segments = read_segments(workspace["valid"])
    metrics_log = workspace["root"] / "metrics.jsonl"
    punct_dir = workspace["root"] / "ckpt-punct"
    caps_dir = workspace["root"] / "ckpt-caps"
    punct_result = finetune(
        train_segments, valid_segments,
        TrainConfig(model_name="tiny", task="punct", learning_rate=4e-4,
                    batch_size=32, epochs=8, seed=0, max_len=MAX_LEN),
        punct_dir, metrics_log,
    )
    caps_result = finetune(
        train_segments, valid_segments,
        TrainConfig(model_name="tiny", task="caps", learning_rate=4e-4,
                    batch_size=32, epochs=2, seed=0, max_len=MAX_LEN),
        caps_dir, metrics_log,
    )
    return {
        "punct_dir": punct_dir,
        "caps_dir": caps_dir,
        "punct_result": punct_result,
        "caps_result": caps_result,
        "metrics_log": metrics_log,
    }
