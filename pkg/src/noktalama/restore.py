"""End-to-end correction: raw text in, punctuated cased text out."""
from __future__ import annotations

from .pipeline import extract_document, inference_windows, merge_window_predictions
from .reconstruct import DEFAULT_POLICY, RenderPolicy, reconstruct
from .tagger import TaggerBackend
from .tokenizer import Vocab


def correct_text(
    text: str,
    backend: TaggerBackend,
    vocab: Vocab,
    max_len: int = 512,
    policy: RenderPolicy = DEFAULT_POLICY,
    strict: bool = False,
) -> str:
    """Strip existing punctuation/case, predict labels, and re-render."""
    payload = extract_document("input", text, vocab)
    if not payload.tokens:
        return ""
    windows = inference_windows(payload, max_len)
    if hasattr(backend, "predict_batch"):
        predictions = backend.predict_batch([w.tokens for w in windows])
    else:
        predictions = [backend.predict(w.tokens) for w in windows]
    punct, caps = merge_window_predictions(windows, predictions, len(payload.tokens))
    return reconstruct(payload.tokens, punct, caps, policy, strict=strict)
