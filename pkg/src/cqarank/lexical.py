"""Lexical similarity measures over preprocessed text views.

All six measures are symmetric, live in [0, 1] and return 1 for identical
non-empty inputs.  Overlap measures normalize the intersection size by the
mean of the two set sizes.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DataError
from .preprocess import LexResources, TextView, tag_nouns


@dataclass(frozen=True)
class IdfTable:
    """Document frequencies over one training corpus."""

    doc_count: int
    df: dict[str, int]

    def weight(self, term: str, tf: int) -> float:
        # smoothed idf keeps weights positive for unseen terms (df = 0)
        idf = math.log((self.doc_count + 1) / (self.df.get(term, 0) + 1)) + 1.0
        return tf * idf


def build_idf(corpus: Sequence[TextView]) -> IdfTable:
    """Count, per term, the number of views containing it."""
    if not corpus:
        raise DataError("cannot build idf table from an empty corpus")
    df: Counter[str] = Counter()
    for view in corpus:
        df.update(set(view.tokens))
    return IdfTable(doc_count=len(corpus), df=dict(df))


def _cosine(u: Counter, v: Counter) -> float:
    if not u or not v:
        return 0.0
    dot = sum(count * v[term] for term, count in u.items())
    norm_u = math.sqrt(sum(c * c for c in u.values()))
    norm_v = math.sqrt(sum(c * c for c in v.values()))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return dot / (norm_u * norm_v)


def _word_ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def cosine_word_ngrams(a: TextView, b: TextView, n: int) -> float:
    """Cosine over word n-gram count vectors; 0 when either side has none."""
    if n not in (1, 2):
        raise ValueError("word n-gram order must be 1 or 2")
    return _cosine(_word_ngrams(a.tokens, n), _word_ngrams(b.tokens, n))


def _char_3grams(tokens: Sequence[str]) -> Counter:
    text = " ".join(tokens)
    return Counter(text[i : i + 3] for i in range(len(text) - 2))


def cosine_char_3grams(a: TextView, b: TextView) -> float:
    """Cosine over character trigrams of the space-joined tokens."""
    return _cosine(_char_3grams(a.tokens), _char_3grams(b.tokens))


def cosine_tfidf(a: TextView, b: TextView, idf: IdfTable) -> float:
    """Cosine of tf-idf weighted unigram vectors."""
    tf_a = Counter(a.tokens)
    tf_b = Counter(b.tokens)
    u = Counter({t: idf.weight(t, c) for t, c in tf_a.items()})
    v = Counter({t: idf.weight(t, c) for t, c in tf_b.items()})
    return _cosine(u, v)


def _mean_size_overlap(set_a: Iterable, set_b: Iterable) -> float:
    sa, sb = set(set_a), set(set_b)
    if not sa and not sb:
        return 0.0
    return len(sa & sb) / ((len(sa) + len(sb)) / 2.0)


def word_overlap(a: TextView, b: TextView) -> float:
    """Shared-token count normalized by the mean vocabulary size."""
    return _mean_size_overlap(a.tokens, b.tokens)


def noun_overlap(a: TextView, b: TextView, res: LexResources) -> float:
    """word_overlap restricted to lexicon-tagged noun lemmas."""
    return _mean_size_overlap(tag_nouns(a, res), tag_nouns(b, res))


def ngram_overlap(a: TextView, b: TextView, n: int, multiset: bool = False) -> float:
    """Shared n-gram count normalized by the mean n-gram set size."""
    if n not in (1, 2, 3):
        raise ValueError("n-gram order must be 1, 2 or 3")
    grams_a = _word_ngrams(a.tokens, n)
    grams_b = _word_ngrams(b.tokens, n)
    if not multiset:
        return _mean_size_overlap(grams_a.keys(), grams_b.keys())
    total_a = sum(grams_a.values())
    total_b = sum(grams_b.values())
    if total_a + total_b == 0:
        return 0.0
    common = sum(min(count, grams_b[g]) for g, count in grams_a.items())
    return common / ((total_a + total_b) / 2.0)
