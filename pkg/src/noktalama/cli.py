"""Command-line surface for the punctuation/capitalization toolkit.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""
from __future__ import annotations

import json
import platform
import sys
from pathlib import Path

import click

from .config import Config, ConfigError, load_config
from .evaluation import bench as run_bench
from .evaluation import evaluate as run_evaluate
from .labels import PunctLabel
from .pipeline import (
    IngestError,
    SplitSpec,
    distribution,
    extract_document,
    ingest,
    read_segments,
    segment,
    split_dataset,
    write_segments,
)
from .reconstruct import RenderPolicy
from .restore import correct_text
from .tagger import BaselineModel, MODEL_SPECS, train_baseline
from .tokenizer import Vocab, VocabError, load_vocab
from .wire import ExternalBackend, ProtocolError, WireServer


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _build_config(config_path, **overrides) -> Config:
    try:
        cfg = load_config(config_path)
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        cfg.validate()
    except ConfigError as exc:
        _fail(str(exc), code=2)
    return cfg


def _load_vocab(cfg: Config) -> Vocab:
    if not cfg.vocab_path:
        _fail("config field 'vocab_path': a vocabulary file is required", code=2)
    try:
        return load_vocab(cfg.vocab_path)
    except (OSError, VocabError) as exc:
        _fail(f"cannot load vocabulary: {exc}")


def _build_backend(cfg: Config):
    if cfg.backend == "external":
        if not cfg.endpoint:
            _fail("config field 'endpoint': required for the external backend", code=2)
        host, _, port = cfg.endpoint.rpartition(":")
        return ExternalBackend(host, int(port), max_len=cfg.max_len)
    if not cfg.model_path:
        _fail("config field 'model_path': required for the baseline backend", code=2)
    try:
        model = BaselineModel.load(cfg.model_path)
    except (OSError, ValueError, KeyError) as exc:
        _fail(f"cannot load baseline model: {exc}")
    model.max_len = cfg.max_len
    return model


def _policy(cfg: Config) -> RenderPolicy:
    return RenderPolicy(join_after_apostrophe=cfg.join_after_apostrophe)


def _read_text(input_path: str | None) -> str:
    if input_path in (None, "-"):
        data = sys.stdin.buffer.read()
    else:
        data = Path(input_path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        _fail(f"input is not valid UTF-8: {exc}")


config_option = click.option("--config", "config_path", default=None,
                             help="Config file (default: $NOKTALAMA_CONFIG).")


@click.group()
def main():
    """Turkish punctuation and capitalization restoration toolkit."""


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--output", "output_dir", required=True)
@click.option("--format", "format_", type=click.Choice(["csv", "jsonl"]), default=None)
@click.option("--column", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--max-len", type=int, default=None)
@click.option("--seed", type=int, default=None)
@config_option
def prepare(input_path, output_dir, format_, column, vocab_path, max_len, seed, config_path):
    """Turn a raw corpus into labeled train/test/validation JSONL files."""
    cfg = _build_config(config_path, format=format_, column=column,
                        vocab_path=vocab_path, max_len=max_len, seed=seed)
    vocab = _load_vocab(cfg)
    try:
        docs = [(f"doc{idx:06d}", text)
                for idx, text in enumerate(ingest(input_path, cfg.format, cfg.column))]
    except (OSError, IngestError) as exc:
        _fail(str(exc))
    spec = SplitSpec(cfg.train_frac, cfg.test_frac, cfg.valid_frac, cfg.seed)
    splits = dict(zip(("train", "test", "validation"), split_dataset(docs, spec)))
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {}
    for name, split_docs in splits.items():
        n_segments = 0
        with open(out / f"{name}.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            for doc_id, text in split_docs:
                payload = extract_document(doc_id, text, vocab)
                n_segments += write_segments(segment(payload, cfg.content_budget), fh)
        summary[name] = {"docs": len(split_docs), "segments": n_segments}
    for name, row in summary.items():
        click.echo(f"{name}: {row['docs']} docs, {row['segments']} segments")


@main.command()
@click.option("--input", "input_path", default=None,
              help="Text file to correct; stdin when omitted.")
@click.option("--backend", type=click.Choice(["baseline", "external"]), default=None)
@click.option("--model-path", default=None)
@click.option("--endpoint", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--max-len", type=int, default=None)
@config_option
def correct(input_path, backend, model_path, endpoint, vocab_path, max_len, config_path):
    """Restore punctuation and capitalization; corrected text on stdout."""
    cfg = _build_config(config_path, backend=backend, model_path=model_path,
                        endpoint=endpoint, vocab_path=vocab_path, max_len=max_len)
    text = _read_text(input_path)
    if not text.strip():
        return
    vocab = _load_vocab(cfg)
    tagger = _build_backend(cfg)
    policy = _policy(cfg)
    outputs = []
    try:
        for line in text.splitlines():
            outputs.append(
                correct_text(line, tagger, vocab, cfg.content_budget, policy)
                if line.strip() else ""
            )
    except ProtocolError as exc:
        _fail(str(exc))
    click.echo("\n".join(outputs))


def _distribution_text(table: dict) -> str:
    splits = list(table)
    chars = [label.char for label in PunctLabel if label is not PunctLabel.NONE]
    width = max(12, *(len(s) + 2 for s in splits))
    lines = ["mark  " + "".join(f"{s:>{width}}" for s in splits)]
    for ch in chars:
        lines.append(f"{ch:<6}" + "".join(f"{table[s][ch]:>{width},}" for s in splits))
    return "\n".join(lines)


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--format", "format_", type=click.Choice(["csv", "jsonl"]), default=None)
@click.option("--column", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--max-len", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--json", "as_json", is_flag=True, help="Also print machine-readable JSON.")
@config_option
def stats(input_path, format_, column, vocab_path, max_len, seed, as_json, config_path):
    """Punctuation mark distribution per split, plus a total column."""
    cfg = _build_config(config_path, format=format_, column=column,
                        vocab_path=vocab_path, max_len=max_len, seed=seed)
    vocab = _load_vocab(cfg)
    try:
        docs = [(f"doc{idx:06d}", text)
                for idx, text in enumerate(ingest(input_path, cfg.format, cfg.column))]
    except (OSError, IngestError) as exc:
        _fail(str(exc))
    spec = SplitSpec(cfg.train_frac, cfg.test_frac, cfg.valid_frac, cfg.seed)
    splits = dict(zip(("train", "test", "validation"), split_dataset(docs, spec)))
    per_split = {
        name: [seg for doc_id, text in split_docs
               for seg in segment(extract_document(doc_id, text, vocab), cfg.content_budget)]
        for name, split_docs in splits.items()
    }
    table = distribution(per_split)
    table["total"] = {
        ch: sum(table[s][ch] for s in ("train", "test", "validation"))
        for ch in table["train"]
    }
    click.echo(_distribution_text(table))
    if as_json:
        click.echo(json.dumps(table, ensure_ascii=False))


@main.command("train-baseline")
@click.option("--input", "input_path", required=True, help="Labeled train JSONL.")
@click.option("--output", "output_path", required=True, help="Model JSON path.")
@click.option("--vocab", "vocab_path", default=None)
@click.option("--alpha", type=float, default=1.0)
@config_option
def train_baseline_cmd(input_path, output_path, vocab_path, alpha, config_path):
    """Train the trigram baseline tagger from prepared segments."""
    cfg = _build_config(config_path, vocab_path=vocab_path)
    vocab = _load_vocab(cfg)
    try:
        with open(input_path, encoding="utf-8") as fh:
            segments = read_segments(fh, vocab)
        model = train_baseline(segments, alpha=alpha)
    except (OSError, ValueError) as exc:
        _fail(str(exc))
    model.save(output_path)
    click.echo(f"trained on {len(segments)} segments -> {output_path}")


@main.command()
@click.option("--input", "input_path", required=True, help="Gold labeled JSONL.")
@click.option("--backend", type=click.Choice(["baseline", "external"]), default=None)
@click.option("--model-path", default=None)
@click.option("--endpoint", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--json", "as_json", is_flag=True)
@click.option("--csv-dir", default=None, help="Write confusion matrix CSVs here.")
@config_option
def evaluate(input_path, backend, model_path, endpoint, vocab_path, as_json,
             csv_dir, config_path):
    """Per-class precision/recall/F1 of a backend against gold labels."""
    cfg = _build_config(config_path, backend=backend, model_path=model_path,
                        endpoint=endpoint, vocab_path=vocab_path)
    vocab = _load_vocab(cfg)
    tagger = _build_backend(cfg)
    try:
        with open(input_path, encoding="utf-8") as fh:
            segments = read_segments(fh, vocab)
        punct_report, caps_report = run_evaluate(tagger, segments)
    except (OSError, ValueError, ProtocolError) as exc:
        _fail(str(exc))
    click.echo(punct_report.table())
    click.echo("")
    click.echo(caps_report.table())
    if as_json:
        click.echo(json.dumps(
            {"punct": punct_report.to_dict(), "caps": caps_report.to_dict()},
            ensure_ascii=False))
    if csv_dir:
        out = Path(csv_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, report in (("punct", punct_report), ("caps", caps_report)):
            with open(out / f"confusion_{name}.csv", "w", encoding="utf-8") as fh:
                report.confusion.write_csv(fh)


@main.command()
@click.option("--input", "input_path", required=True, help="Labeled JSONL of examples.")
@click.option("-n", "n_examples", type=int, default=1000)
@click.option("--backend", type=click.Choice(["baseline", "external"]), default=None)
@click.option("--model-path", default=None)
@click.option("--endpoint", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--json", "as_json", is_flag=True)
@config_option
def bench(input_path, n_examples, backend, model_path, endpoint, vocab_path,
          as_json, config_path):
    """Wall-clock time to predict n examples (informational)."""
    cfg = _build_config(config_path, backend=backend, model_path=model_path,
                        endpoint=endpoint, vocab_path=vocab_path)
    vocab = _load_vocab(cfg)
    tagger = _build_backend(cfg)
    note = f"{platform.processor() or platform.machine()}, {platform.system()}"
    try:
        with open(input_path, encoding="utf-8") as fh:
            segments = read_segments(fh, vocab)
        report = run_bench(tagger, segments, n=n_examples, hardware_note=note)
    except (OSError, ValueError, ProtocolError) as exc:
        _fail(str(exc))
    click.echo(report.table())
    if as_json:
        click.echo(json.dumps(report.to_dict(), ensure_ascii=False))


@main.command()
@click.option("--model-path", default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=7755)
@config_option
def serve(model_path, vocab_path, host, port, config_path):
    """Serve the baseline tagger over the JSON-lines wire protocol."""
    cfg = _build_config(config_path, model_path=model_path, vocab_path=vocab_path,
                        backend="baseline")
    tagger = _build_backend(cfg)
    vocab = _load_vocab(cfg)
    tagger = _VocabAwareBaseline(tagger, vocab)
    server = WireServer(tagger, host, port)
    click.echo(f"serving {server.backend.model_name} on {server.address[0]}:{server.address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()


class _VocabAwareBaseline:
    """Maps wire-protocol surfaces to vocab ids before baseline lookup."""

    def __init__(self, model: BaselineModel, vocab: Vocab):
        self._model = model
        self._vocab = vocab
        self.model_name = model.model_name
        self.max_len = model.max_len
        self.capabilities = model.capabilities

    def predict(self, tokens):
        from .tokenizer import Token

        resolved = [
            Token(t.surface, t.is_continuation, self._vocab.id_of(t.surface), t.word_index)
            for t in tokens
        ]
        return self._model.predict(resolved)


@main.command("serve-api")
@click.option("--model-path", default=None)
@click.option("--endpoint", default=None)
@click.option("--backend", type=click.Choice(["baseline", "external"]), default=None)
@click.option("--vocab", "vocab_path", default=None)
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@config_option
def serve_api(model_path, endpoint, backend, vocab_path, host, port, config_path):
    """Serve the HTTP API (FastAPI) wrapping the core pipeline."""
    import uvicorn

    from .service import create_app

    cfg = _build_config(config_path, model_path=model_path, endpoint=endpoint,
                        backend=backend, vocab_path=vocab_path)
    vocab = _load_vocab(cfg)
    tagger = _build_backend(cfg)
    app = create_app(tagger, vocab, cfg.content_budget, _policy(cfg))
    uvicorn.run(app, host=host, port=port)


@main.command()
def models():
    """List the known encoder sizes and their architecture metadata."""
    click.echo(f"{'name':<8}{'hidden':>8}{'heads':>7}{'layers':>8}{'params (M)':>12}")
    for spec in MODEL_SPECS.values():
        click.echo(f"{spec.name:<8}{spec.hidden_size:>8}{spec.attn_heads:>7}"
                   f"{spec.hidden_layers:>8}{spec.params_millions:>12.1f}")


if __name__ == "__main__":
    main()
