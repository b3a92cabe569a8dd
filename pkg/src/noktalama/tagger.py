"""Tagger backends: the statistical baseline, oracle/majority helpers.

The baseline is a trigram tagger with unigram and majority backoff. It is
deliberately simple: it exists so the whole pipeline (training data,
prediction, reconstruction, evaluation) is exercisable on a laptop without
a GPU, and so evaluation has a non-trivial model to compare against.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .labels import CAP_ALPHABET, CapTag, PUNCT_ALPHABET, PunctLabel
from .pipeline import LabeledSegment
from .tokenizer import Token

# Context sentinels for positions before/after the token stream.
_BOS = -1
_EOS = -2


class EmptyTrainingSetError(ValueError):
    pass


class LengthExceededError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    """Architecture metadata for one named encoder size."""

    name: str
    hidden_size: int
    attn_heads: int
    hidden_layers: int
    params_millions: float


MODEL_SPECS = {
    "tiny": ModelSpec("tiny", 128, 2, 2, 4.6),
    "mini": ModelSpec("mini", 256, 4, 4, 11.6),
    "small": ModelSpec("small", 512, 8, 4, 29.6),
    "medium": ModelSpec("medium", 512, 8, 8, 42.2),
    "base": ModelSpec("base", 768, 12, 12, 110.7),
}


class TaggerBackend:
    """Common contract: one (punct, caps) label pair per input token."""

    model_name: str = "backend"
    capabilities = {"punct": True, "caps": True}
    max_len: int = 512

    def predict(self, tokens: list[Token]) -> tuple[list[PunctLabel], list[CapTag]]:
        raise NotImplementedError


def _argmax(counts: dict, alphabet: list):
    """Highest count wins; ties break by alphabet order."""
    best = alphabet[0]
    best_count = counts.get(best.value, 0)
    for label in alphabet[1:]:
        c = counts.get(label.value, 0)
        if c > best_count:
            best, best_count = label, c
    return best


@dataclass
class BaselineModel(TaggerBackend):
    """Trigram tagger over vocab ids with unigram and majority backoff."""

    trigram_punct: dict[tuple[int, int, int], dict[str, float]] = field(default_factory=dict)
    trigram_caps: dict[tuple[int, int, int], dict[str, float]] = field(default_factory=dict)
    unigram_punct: dict[int, dict[str, float]] = field(default_factory=dict)
    unigram_caps: dict[int, dict[str, float]] = field(default_factory=dict)
    smoothing_alpha: float = 1.0
    majority_punct: PunctLabel = PunctLabel.NONE
    majority_caps: CapTag = CapTag.NON
    model_name: str = "baseline"
    max_len: int = 512

    def predict(self, tokens: list[Token]) -> tuple[list[PunctLabel], list[CapTag]]:
        if len(tokens) > self.max_len:
            raise LengthExceededError(f"{len(tokens)} tokens exceed max_len={self.max_len}")
        ids = [t.vocab_id for t in tokens]
        punct: list[PunctLabel] = []
        caps: list[CapTag] = []
        for i, cur in enumerate(ids):
            prev = ids[i - 1] if i > 0 else _BOS
            nxt = ids[i + 1] if i + 1 < len(ids) else _EOS
            key = (prev, cur, nxt)
            p_hist = self.trigram_punct.get(key) or self.unigram_punct.get(cur)
            c_hist = self.trigram_caps.get(key) or self.unigram_caps.get(cur)
            punct.append(_argmax(p_hist, PUNCT_ALPHABET) if p_hist else self.majority_punct)
            caps.append(_argmax(c_hist, CAP_ALPHABET) if c_hist else self.majority_caps)
        return punct, caps

    def to_json(self) -> str:
        """Serialize with sorted keys; identical models give identical bytes."""
        doc = {
            "format": "noktalama-baseline-v1",
            "smoothing_alpha": self.smoothing_alpha,
            "majority_punct": self.majority_punct.value,
            "majority_caps": self.majority_caps.value,
            "trigram_punct": {_key_str(k): v for k, v in self.trigram_punct.items()},
            "trigram_caps": {_key_str(k): v for k, v in self.trigram_caps.items()},
            "unigram_punct": {str(k): v for k, v in self.unigram_punct.items()},
            "unigram_caps": {str(k): v for k, v in self.unigram_caps.items()},
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "BaselineModel":
        doc = json.loads(text)
        return cls(
            trigram_punct={_parse_key(k): v for k, v in doc["trigram_punct"].items()},
            trigram_caps={_parse_key(k): v for k, v in doc["trigram_caps"].items()},
            unigram_punct={int(k): v for k, v in doc["unigram_punct"].items()},
            unigram_caps={int(k): v for k, v in doc["unigram_caps"].items()},
            smoothing_alpha=doc["smoothing_alpha"],
            majority_punct=PunctLabel(doc["majority_punct"]),
            majority_caps=CapTag(doc["majority_caps"]),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "BaselineModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())


def _key_str(key: tuple[int, int, int]) -> str:
    return f"{key[0]},{key[1]},{key[2]}"


def _parse_key(text: str) -> tuple[int, int, int]:
    a, b, c = text.split(",")
    return (int(a), int(b), int(c))


def _smoothed(alphabet: list, alpha: float) -> dict[str, float]:
    return {label.value: alpha for label in alphabet}


def train_baseline(segments: list[LabeledSegment], alpha: float = 1.0) -> BaselineModel:
    """Count (context -> label) observations with additive-alpha smoothing."""
    if alpha <= 0:
        raise ValueError("smoothing alpha must be positive")
    model = BaselineModel(smoothing_alpha=alpha)
    total_punct: dict[str, float] = {}
    total_caps: dict[str, float] = {}
    saw_tokens = False
    for seg in segments:
        ids = [t.vocab_id for t in seg.tokens]
        for i, cur in enumerate(ids):
            saw_tokens = True
            prev = ids[i - 1] if i > 0 else _BOS
            nxt = ids[i + 1] if i + 1 < len(ids) else _EOS
            key = (prev, cur, nxt)
            p_label = seg.punct[i].value
            c_label = seg.caps[i].value
            for table, k in ((model.trigram_punct, key), (model.unigram_punct, cur)):
                hist = table.setdefault(k, _smoothed(PUNCT_ALPHABET, alpha))
                hist[p_label] += 1
            for table, k in ((model.trigram_caps, key), (model.unigram_caps, cur)):
                hist = table.setdefault(k, _smoothed(CAP_ALPHABET, alpha))
                hist[c_label] += 1
            total_punct[p_label] = total_punct.get(p_label, 0) + 1
            total_caps[c_label] = total_caps.get(c_label, 0) + 1
    if not saw_tokens:
        raise EmptyTrainingSetError("no tokens in training set")
    model.majority_punct = _argmax(total_punct, PUNCT_ALPHABET)
    model.majority_caps = _argmax(total_caps, CAP_ALPHABET)
    return model


class MajorityBackend(TaggerBackend):
    """Predicts the same label pair for every token."""

    model_name = "majority"

    def __init__(self, punct: PunctLabel = PunctLabel.NONE, caps: CapTag = CapTag.NON):
        self.punct = punct
        self.caps = caps

    def predict(self, tokens: list[Token]) -> tuple[list[PunctLabel], list[CapTag]]:
        return [self.punct] * len(tokens), [self.caps] * len(tokens)


class OracleBackend(TaggerBackend):
    """Replays gold labels for known token sequences; for tests and loopback."""

    model_name = "oracle"

    def __init__(self, segments: list[LabeledSegment]):
        self._answers = {
            tuple(t.surface for t in seg.tokens): (list(seg.punct), list(seg.caps))
            for seg in segments
        }

    def predict(self, tokens: list[Token]) -> tuple[list[PunctLabel], list[CapTag]]:
        key = tuple(t.surface for t in tokens)
        if key not in self._answers:
            return [PunctLabel.NONE] * len(tokens), [CapTag.NON] * len(tokens)
        punct, caps = self._answers[key]
        return list(punct), list(caps)
