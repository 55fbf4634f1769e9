"""Tokenization and the two text views every similarity measure consumes.

The pipeline is tokenize -> drop stopwords -> lemmatize (table lookup) ->
optionally Porter-stem.  Lexical measures read the stemmed view; embedding
and graph measures read the unstemmed one, whose lemmas stay untouched.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError
from .porter import porter_stem

# Maximal runs of Unicode letters, digits and apostrophes; everything else
# separates.  Underscore is excluded on purpose.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")

STEMMED = "stemmed"
UNSTEMMED = "unstemmed"


@dataclass(frozen=True)
class TextView:
    """A preprocessed rendering of one text field."""

    tokens: tuple[str, ...]
    lemmas: tuple[str, ...]
    stemmed: bool
    stopwords_removed: bool

    def __post_init__(self):
        if len(self.tokens) != len(self.lemmas):
            raise ValueError("tokens and lemmas must be parallel")


@dataclass(frozen=True)
class LexResources:
    stopwords: frozenset[str]
    lemma_table: dict[str, str]
    noun_lexicon: frozenset[str]


def tokenize(raw: str) -> list[str]:
    """Lowercase and split into letter/digit/apostrophe runs."""
    return _TOKEN_RE.findall(raw.lower())


def build_views(raw: str, res: LexResources, variant: str) -> TextView:
    """Run the preprocessing pipeline for one text field."""
    if variant not in (STEMMED, UNSTEMMED):
        raise ValueError(f"unknown view variant '{variant}'")
    kept = [t for t in tokenize(raw) if t not in res.stopwords]
    lemmas = tuple(res.lemma_table.get(t, t) for t in kept)
    if variant == STEMMED:
        tokens = tuple(porter_stem(lemma) for lemma in lemmas)
    else:
        tokens = lemmas
    return TextView(
        tokens=tokens,
        lemmas=lemmas,
        stemmed=variant == STEMMED,
        stopwords_removed=True,
    )


def tag_nouns(view: TextView, res: LexResources) -> set[str]:
    """Lemmas of the view that the noun lexicon knows."""
    return {lemma for lemma in view.lemmas if lemma in res.noun_lexicon}


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def load_lemma_table(path: str | Path) -> dict[str, str]:
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise DataError(f"line {lineno}: expected 'token<TAB>lemma'")
            table[parts[0].strip().lower()] = parts[1].strip().lower()
    return table


def load_noun_lexicon(path: str | Path) -> frozenset[str]:
    nouns = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            lemma = line.strip().lower()
            if lemma:
                nouns.add(lemma)
    return frozenset(nouns)


def load_lex_resources(
    stopwords_path: str | Path,
    lemma_table_path: str | Path,
    noun_lexicon_path: str | Path,
) -> LexResources:
    return LexResources(
        stopwords=load_stopwords(stopwords_path),
        lemma_table=load_lemma_table(lemma_table_path),
        noun_lexicon=load_noun_lexicon(noun_lexicon_path),
    )
