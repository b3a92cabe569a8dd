"""Command-line interface: fine-tune checkpoints and serve them."""
from __future__ import annotations

import sys

import click

from .data import SchemaError, read_segments
from .model import ARCHITECTURES
from .serve import AdapterServer
from .train import Checkpoint, TrainConfig, finetune


@click.group()
def main():
    """Neural punctuation/capitalization tagger: training and serving."""


@main.command("finetune")
@click.option("--train", "train_path", required=True, help="Labeled train JSONL.")
@click.option("--valid", "valid_path", default=None, help="Labeled validation JSONL.")
@click.option("--output", "output_dir", required=True, help="Checkpoint directory.")
@click.option("--task", type=click.Choice(["punct", "caps"]), default="punct")
@click.option("--model", "model_name", type=click.Choice(sorted(ARCHITECTURES)),
              default="tiny")
@click.option("--lr", "learning_rate", type=float, default=4e-4)
@click.option("--batch-size", type=int, default=32)
@click.option("--epochs", type=int, default=3)
@click.option("--max-grad-norm", type=float, default=None)
@click.option("--max-len", type=int, default=128)
@click.option("--seed", type=int, default=0)
@click.option("--metrics-log", default=None, help="Append {epoch, split, task, f1} JSONL here.")
def finetune_cmd(train_path, valid_path, output_dir, task, model_name, learning_rate,
                 batch_size, epochs, max_grad_norm, max_len, seed, metrics_log):
    """Fine-tune a token-classification model on prepared segments."""
    config = TrainConfig(
        model_name=model_name, task=task, learning_rate=learning_rate,
        batch_size=batch_size, max_grad_norm=max_grad_norm, epochs=epochs,
        seed=seed, max_len=max_len,
    )
    try:
        train_segments = read_segments(train_path)
        valid_segments = read_segments(valid_path) if valid_path else []
        result = finetune(train_segments, valid_segments, config, output_dir, metrics_log)
    except (OSError, SchemaError, ValueError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    except RuntimeError as exc:
        hint = " (try a smaller --batch-size)" if "memory" in str(exc).lower() else ""
        click.echo(f"{exc}{hint}", err=True)
        sys.exit(1)
    for epoch, loss in enumerate(result.epoch_losses, start=1):
        line = f"epoch {epoch}: train loss {loss:.4f}"
        if result.valid_f1:
            line += f", valid macro F1 {result.valid_f1[epoch - 1]:.4f}"
        click.echo(line)
    click.echo(f"checkpoint -> {output_dir}")


@main.command("serve")
@click.option("--punct", "punct_dir", required=True, help="Punctuation checkpoint.")
@click.option("--caps", "caps_dir", required=True, help="Capitalization checkpoint.")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=7766)
def serve_cmd(punct_dir, caps_dir, host, port):
    """Serve both task models over the JSON-lines TCP protocol."""
    try:
        punct = Checkpoint.load(punct_dir)
        caps = Checkpoint.load(caps_dir)
    except (OSError, ValueError, KeyError) as exc:
        click.echo(f"cannot load checkpoint: {exc}", err=True)
        sys.exit(1)
    if punct.task != "punct" or caps.task != "caps":
        click.echo("checkpoint tasks do not match --punct/--caps roles", err=True)
        sys.exit(1)
    server = AdapterServer(punct, caps, host, port)
    click.echo(f"listening on {server.address[0]}:{server.address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()


if __name__ == "__main__":
    main()
