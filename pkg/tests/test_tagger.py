import random
import time

import pytest

from helpers import gen_sentence
from noktalama.evaluation import evaluate
from noktalama.labels import CapTag, PunctLabel
from noktalama.pipeline import extract_document, segment
from noktalama.tagger import (
    BaselineModel,
    EmptyTrainingSetError,
    LengthExceededError,
    MODEL_SPECS,
    MajorityBackend,
    OracleBackend,
    train_baseline,
)


def _segments(texts, vocab, max_len=512):
    return [
        seg
        for i, text in enumerate(texts)
        for seg in segment(extract_document(f"doc{i}", text, vocab), max_len)
    ]


def test_model_specs_table():
    rows = {
        "tiny": (128, 2, 2, 4.6),
        "mini": (256, 4, 4, 11.6),
        "small": (512, 8, 4, 29.6),
        "medium": (512, 8, 8, 42.2),
        "base": (768, 12, 12, 110.7),
    }
    for name, (hidden, heads, layers, params) in rows.items():
        spec = MODEL_SPECS[name]
        assert (spec.hidden_size, spec.attn_heads, spec.hidden_layers,
                spec.params_millions) == (hidden, heads, layers, params)


class TestTrainBaseline:
    def test_single_observation_counts(self, vocab):
        segs = _segments(["ev."], vocab)
        model = train_baseline(segs, alpha=1.0)
        ev_id = vocab.entries["ev"]
        hist = model.unigram_punct[ev_id]
        assert hist["period"] == 2.0  # 1 observation + alpha
        assert hist["comma"] == 1.0   # alpha only
        punct, _ = model.predict(segs[0].tokens)
        assert punct == [PunctLabel.PERIOD]

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSetError):
            train_baseline([])

    def test_majority_punct_is_none_on_natural_text(self, vocab):
        rng = random.Random(3)
        segs = _segments([gen_sentence(rng) for _ in range(50)], vocab)
        model = train_baseline(segs)
        assert model.majority_punct == PunctLabel.NONE
        assert model.majority_caps == CapTag.NON


class TestPredict:
    def test_memorizes_training_sentence(self, vocab):
        segs = _segments(["Türkiye'nin her tarafında devam etmektedir."], vocab)
        model = train_baseline(segs)
        punct, caps = model.predict(segs[0].tokens)
        assert punct == segs[0].punct
        assert caps == segs[0].caps

    def test_empty_token_list(self, vocab):
        model = train_baseline(_segments(["ev."], vocab))
        assert model.predict([]) == ([], [])

    def test_unseen_token_gets_majority(self, vocab):
        model = train_baseline(_segments(["ev geldi."], vocab))
        unseen = _segments(["okul"], vocab)[0].tokens
        punct, caps = model.predict(unseen)
        assert punct == [model.majority_punct]
        assert caps == [model.majority_caps]

    def test_length_exceeded(self, vocab):
        model = train_baseline(_segments(["ev."], vocab))
        model.max_len = 2
        tokens = _segments(["ev okul kitap"], vocab)[0].tokens
        with pytest.raises(LengthExceededError):
            model.predict(tokens)

    def test_trigram_beats_unigram_in_context(self, vocab):
        # 'ev' is sentence-final twice and medial once; the medial context
        # must come back punctuation-free via the trigram table.
        segs = _segments(["okul ev.", "kitap ev.", "okul ev kitap."], vocab)
        model = train_baseline(segs)
        medial = _segments(["okul ev kitap"], vocab)[0].tokens
        punct, _ = model.predict(medial)
        assert punct[1] == PunctLabel.NONE


class TestSerialization:
    def test_round_trip(self, vocab):
        model = train_baseline(_segments(["Ev geldi.", "Okul, gitti!"], vocab))
        restored = BaselineModel.from_json(model.to_json())
        assert restored.to_json() == model.to_json()
        tokens = _segments(["ev geldi"], vocab)[0].tokens
        assert restored.predict(tokens) == model.predict(tokens)

    def test_identical_training_gives_identical_bytes(self, vocab):
        texts = [gen_sentence(random.Random(5)) for _ in range(20)]
        a = train_baseline(_segments(texts, vocab), alpha=0.5)
        b = train_baseline(_segments(texts, vocab), alpha=0.5)
        assert a.to_json() == b.to_json()

    def test_save_load(self, vocab, tmp_path):
        model = train_baseline(_segments(["ev."], vocab))
        path = tmp_path / "model.json"
        model.save(path)
        assert BaselineModel.load(path).to_json() == model.to_json()


def test_baseline_beats_majority_macro_f1(vocab):
    rng = random.Random(13)
    train_texts = [gen_sentence(rng) for _ in range(800)]
    held_out = [gen_sentence(rng) for _ in range(200)]
    start = time.perf_counter()
    model = train_baseline(_segments(train_texts, vocab))
    test_segs = _segments(held_out, vocab)
    baseline_report, _ = evaluate(model, test_segs)
    majority_report, _ = evaluate(MajorityBackend(), test_segs)
    assert time.perf_counter() - start < 10.0
    assert baseline_report.macro_f1 > majority_report.macro_f1


def test_oracle_backend_replays_gold(vocab):
    segs = _segments(["Ev geldi.", "Okul gitti!"], vocab)
    oracle = OracleBackend(segs)
    for seg in segs:
        assert oracle.predict(seg.tokens) == (seg.punct, seg.caps)
