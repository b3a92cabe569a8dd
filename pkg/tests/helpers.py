"""Shared toy vocabulary and deterministic Turkish-like corpus generator."""
from __future__ import annotations

import random

from noktalama.casing import apply_case, CaseClass, turkish_upper
from noktalama.tokenizer import Vocab

WORDS = [
    "ev", "okul", "kitap", "deneme", "yapıldı", "geldi", "gitti", "büyük",
    "küçük", "yeni", "eski", "güzel", "hızlı", "yavaş", "çocuk", "öğrenci",
    "öğretmen", "şehir", "ülke", "devam", "etmektedir", "her", "tarafında",
    "bugün", "yarın", "sonra", "önce", "ile", "ama", "çünkü", "gibi",
    "kadar", "zaman", "yıl", "gün", "insan", "haber", "konu", "durum",
    "sonuç", "başladı", "bitti", "oldu", "vardı", "dedi", "söyledi",
]

PROPER = ["türkiye", "ankara", "izmir", "istanbul", "yıldız", "karadeniz"]

SUFFIXES = ["nin", "nın", "de", "da", "ye", "ler", "den"]

ACRONYMS = ["ytu", "abd", "tbmm", "kdv"]

_CHARS = "abcçdefgğhıijklmnoöprsştuüvyz0123456789"


def toy_vocab_tokens() -> list[str]:
    """Vocabulary lines covering the toy corpus with no unknowns.

    Single characters and their continuation forms guarantee every
    lowercase word tokenizes; whole-word entries keep token counts small.
    The reference subword pieces (y/##tu, okulu/##dur) are present, and 'ytu' and
    'okuludur' are deliberately absent as whole words.
    """
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]
    tokens += list(_CHARS)
    tokens += ["##" + c for c in _CHARS]
    seen = set(tokens)
    words = WORDS + PROPER + ACRONYMS + ["okulu", "en", "iyi"]
    words = [w for w in words if w not in ("ytu", "okuludur")]
    for w in words:
        if len(w) > 1 and w not in seen:
            tokens.append(w)
            seen.add(w)
    for s in SUFFIXES + ["dur", "tu"]:
        for form in (s, "##" + s):
            if form not in seen:
                tokens.append(form)
                seen.add(form)
    return tokens


def write_vocab(path, tokens=None) -> None:
    tokens = toy_vocab_tokens() if tokens is None else tokens
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(tokens) + "\n")


def toy_vocab() -> Vocab:
    return Vocab(entries={t: i for i, t in enumerate(toy_vocab_tokens())})


def gen_sentence(rng: random.Random) -> str:
    """One Turkish-like sentence with attached punctuation and mixed casing."""
    n = rng.randint(3, 8)
    words = []
    for i in range(n):
        r = rng.random()
        if r < 0.15:
            word = rng.choice(PROPER) + "'" + rng.choice(SUFFIXES)
            word = apply_case(word, CaseClass.FIRST_CAP)
        elif r < 0.22:
            word = turkish_upper(rng.choice(ACRONYMS))
        else:
            word = rng.choice(WORDS)
        words.append(word)
    if not words[0][0].isupper():
        words[0] = apply_case(words[0], CaseClass.FIRST_CAP)
    if n > 3 and rng.random() < 0.3:
        k = rng.randint(1, n - 2)
        words[k] = words[k] + rng.choice([",", ",", ":", "-"])
    final = rng.choice([".", ".", ".", ".", "!", "?", ";"])
    return " ".join(words) + final


def gen_paragraph(rng: random.Random, n_sentences: int | None = None) -> str:
    n_sentences = n_sentences or rng.randint(2, 5)
    return " ".join(gen_sentence(rng) for _ in range(n_sentences))


def gen_corpus(seed: int, n_docs: int, sentences_per_doc: tuple[int, int] = (2, 6)) -> list[str]:
    rng = random.Random(seed)
    return [
        gen_paragraph(rng, rng.randint(*sentences_per_doc))
        for _ in range(n_docs)
    ]
