import random

import pytest

from helpers import gen_paragraph
from noktalama.labels import CapTag, PunctLabel
from noktalama.pipeline import extract_document
from noktalama.reconstruct import (
    DanglingContinuationError,
    LengthMismatchError,
    RenderPolicy,
    canonicalize,
    reconstruct,
)
from noktalama.tokenizer import Token


def _tok(surface, word_index=0):
    return Token(surface, surface.startswith("##"), -1, word_index)


class TestReconstruct:
    def test_reference_punctuation_sentence(self, vocab):
        payload = extract_document("d", "Türkiye'nin her tarafında devam etmektedir.", vocab)
        text = reconstruct(payload.tokens, payload.punct, payload.caps)
        assert text == "Türkiye'nin her tarafında devam etmektedir."

    def test_reference_capitalization_sentence(self, vocab):
        payload = extract_document("d", "YTU Türkiye'nin en iyi okuludur.", vocab)
        text = reconstruct(payload.tokens, payload.punct, payload.caps)
        assert text == "YTU Türkiye'nin en iyi okuludur."

    def test_empty(self):
        assert reconstruct([], [], []) == ""

    def test_apostrophe_inside_merged_word(self):
        # apostrophe predicted on a mid-word subtoken splits the word there
        tokens = [_tok("türkiye"), _tok("##nin"), _tok("geldi", 1)]
        punct = [PunctLabel.APOSTROPHE, PunctLabel.NONE, PunctLabel.PERIOD]
        caps = [CapTag.ONE, CapTag.NON, CapTag.NON]
        assert reconstruct(tokens, punct, caps) == "Türkiye'nin geldi."

    def test_all_caps_spans_whole_merged_word(self):
        tokens = [_tok("y"), _tok("##tu")]
        text = reconstruct(tokens, [PunctLabel.NONE] * 2, [CapTag.CAP, CapTag.NON])
        assert text == "YTU"

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            reconstruct([_tok("ev")], [], [CapTag.NON])

    def test_dangling_continuation_strict(self):
        with pytest.raises(DanglingContinuationError):
            reconstruct([_tok("##tu")], [PunctLabel.NONE], [CapTag.NON], strict=True)

    def test_dangling_continuation_lenient_repairs(self):
        text = reconstruct([_tok("##tu")], [PunctLabel.NONE], [CapTag.NON])
        assert text == "tu"

    def test_no_space_policy_override(self):
        policy = RenderPolicy()
        policy.space_after_punct[PunctLabel.HYPHEN] = False
        tokens = [_tok("a"), _tok("b", 1)]
        text = reconstruct(tokens, [PunctLabel.HYPHEN, PunctLabel.NONE],
                           [CapTag.NON, CapTag.NON], policy)
        assert text == "a-b"


class TestCanonicalize:
    def test_whitespace_and_attach(self):
        assert canonicalize("deneme  , yapıldı") == "deneme, yapıldı"

    def test_mixed_case_coerced(self):
        assert canonicalize("McDonald geldi") == "Mcdonald geldi"

    def test_idempotent_on_random_text(self):
        rng = random.Random(17)
        for _ in range(50):
            once = canonicalize(gen_paragraph(rng))
            assert canonicalize(once) == once

    def test_hyphen_spacing_is_canonical(self):
        assert canonicalize("2010-2012") == "2010- 2012"
        assert canonicalize("2010- 2012") == "2010- 2012"

    def test_non_alphabet_marks_kept_in_words(self):
        assert canonicalize('"ev" geldi') == '"ev" geldi'


class TestRoundTrip:
    def test_round_trip_property_corpus(self, vocab):
        rng = random.Random(23)
        for _ in range(200):
            text = gen_paragraph(rng)
            payload = extract_document("d", text, vocab)
            assert vocab.unk_token not in [t.surface for t in payload.tokens]
            rebuilt = reconstruct(payload.tokens, payload.punct, payload.caps)
            assert canonicalize(rebuilt) == canonicalize(text)

    def test_no_spontaneous_punctuation(self, vocab):
        rng = random.Random(29)
        marks = set(".,!?;:-'")
        for _ in range(50):
            payload = extract_document("d", gen_paragraph(rng), vocab)
            rebuilt = reconstruct(payload.tokens, payload.punct, payload.caps)
            expected = sum(1 for p in payload.punct if p is not PunctLabel.NONE)
            got = sum(1 for c in rebuilt if c in marks)
            assert got == expected
