"""Instance feature vectors: similarity measures applied to per-subtask
field pairs, plus the reciprocal search-rank feature.

Feature names follow `<measure>:<query-field>~<candidate-field>`, so one
instance of subtask B carries e.g. `cos_word:orgq.subject~relq.subject`.
Lexical measures read the stemmed view; centroid, alignment, graph and
frame measures read the unstemmed one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import lexical
from .corpus import Comment, Instance, RelatedQuestion, Thread, binarize_label, grade_label
from .embeddings import VectorStore, centroid_similarity, cwasa_similarity
from .errors import DataError
from .frames import FrameLexicon, frame_overlap_similarity
from .kgraph import KnowledgeGraph, SemanticNetwork, build_graph, kga_similarity
from .lexical import IdfTable
from .preprocess import STEMMED, UNSTEMMED, LexResources, TextView, build_views

MEASURES = (
    "cos_word",
    "cos_char3",
    "cos_tfidf",
    "word_overlap",
    "noun_overlap",
    "ngram_overlap",
    "centroid",
    "cwasa",
    "kga",
    "frames",
)

SEARCH_RANK_FEATURE = "search_rank"

_FIELD_PAIRS = {
    "A": (
        ("relq.subject", "comment"),
        ("relq.body", "comment"),
        ("relq.full", "comment"),
    ),
    "B": (
        ("orgq.subject", "relq.subject"),
        ("orgq.body", "relq.body"),
        ("orgq.full", "relq.full"),
    ),
}
_FIELD_PAIRS["C"] = (
    _FIELD_PAIRS["A"]
    + _FIELD_PAIRS["B"]
    + (
        ("orgq.subject", "comment"),
        ("orgq.body", "comment"),
        ("orgq.full", "comment"),
    )
)

_RANK_SUBTASKS = ("A", "C")


def field_pairs_for_subtask(subtask: str) -> tuple[tuple[str, str], ...]:
    """The (query field, candidate field) combinations of one subtask."""
    try:
        return _FIELD_PAIRS[subtask]
    except KeyError:
        raise ValueError(f"unknown subtask '{subtask}'") from None


@dataclass
class FeatureResources:
    """Everything extraction needs, immutable once assembled."""

    lex: LexResources
    idf: IdfTable
    store: VectorStore
    network: SemanticNetwork
    frame_lexicon: FrameLexicon
    enabled: frozenset[str] = frozenset(MEASURES)
    cosine_word_n: int = 1
    ngram_overlap_n: int = 2
    kg_depth: int = 2
    kg_decay: float = 0.5
    cwasa_denominator: str = "invocab"
    centroid_unit_interval: bool = False

    def __post_init__(self):
        unknown = set(self.enabled) - set(MEASURES)
        if unknown:
            raise ValueError(f"unknown measures enabled: {sorted(unknown)}")


@dataclass(frozen=True)
class FeatureVector:
    instance: Instance
    values: dict[str, float]

    def __post_init__(self):
        for name, value in self.values.items():
            if not math.isfinite(value):
                raise DataError(
                    f"non-finite feature {name} for {self.instance.candidate_id}"
                )


class _ThreadViews:
    """Lazy per-thread cache of field views and knowledge graphs."""

    def __init__(self, thread: Thread, res: FeatureResources):
        self._thread = thread
        self._res = res
        self._views: dict[tuple, TextView] = {}
        self._graphs: dict[tuple, KnowledgeGraph] = {}

    def _field_text(self, key: tuple) -> str:
        kind = key[0]
        if kind == "orgq":
            obj = self._thread
        elif kind == "relq":
            obj = key[1]
        else:
            return key[1].text
        part = key[-1]
        if part == "full":
            return f"{obj.subject} {obj.body}"
        return getattr(obj, part)

    def view(self, key: tuple, variant: str) -> TextView:
        cache_key = key + (variant,)
        if cache_key not in self._views:
            self._views[cache_key] = build_views(
                self._field_text(key), self._res.lex, variant
            )
        return self._views[cache_key]

    def graph(self, key: tuple) -> KnowledgeGraph:
        if key not in self._graphs:
            self._graphs[key] = build_graph(
                self.view(key, UNSTEMMED),
                self._res.network,
                depth=self._res.kg_depth,
                decay=self._res.kg_decay,
            )
        return self._graphs[key]


def _measure_value(
    measure: str, views: _ThreadViews, qkey: tuple, ckey: tuple, res: FeatureResources
) -> float:
    if measure == "cos_word":
        return lexical.cosine_word_ngrams(
            views.view(qkey, STEMMED), views.view(ckey, STEMMED), res.cosine_word_n
        )
    if measure == "cos_char3":
        return lexical.cosine_char_3grams(
            views.view(qkey, STEMMED), views.view(ckey, STEMMED)
        )
    if measure == "cos_tfidf":
        return lexical.cosine_tfidf(
            views.view(qkey, STEMMED), views.view(ckey, STEMMED), res.idf
        )
    if measure == "word_overlap":
        return lexical.word_overlap(
            views.view(qkey, STEMMED), views.view(ckey, STEMMED)
        )
    if measure == "noun_overlap":
        return lexical.noun_overlap(
            views.view(qkey, UNSTEMMED), views.view(ckey, UNSTEMMED), res.lex
        )
    if measure == "ngram_overlap":
        return lexical.ngram_overlap(
            views.view(qkey, STEMMED), views.view(ckey, STEMMED), res.ngram_overlap_n
        )
    if measure == "centroid":
        return centroid_similarity(
            views.view(qkey, UNSTEMMED),
            views.view(ckey, UNSTEMMED),
            res.store,
            map_to_unit=res.centroid_unit_interval,
        )
    if measure == "cwasa":
        return cwasa_similarity(
            views.view(qkey, UNSTEMMED),
            views.view(ckey, UNSTEMMED),
            res.store,
            denominator=res.cwasa_denominator,
        )
    if measure == "kga":
        return kga_similarity(views.graph(qkey), views.graph(ckey))
    if measure == "frames":
        return frame_overlap_similarity(
            views.view(qkey, UNSTEMMED),
            views.view(ckey, UNSTEMMED),
            res.frame_lexicon,
        )
    raise ValueError(f"unknown measure '{measure}'")


def _field_key(descriptor: str, relq: RelatedQuestion | None, comment: Comment | None) -> tuple:
    if descriptor == "comment":
        return ("comment", comment)
    kind, part = descriptor.split(".")
    if kind == "orgq":
        return ("orgq", part)
    return ("relq", relq, part)


def _instance_descriptors(
    thread: Thread, subtask: str
) -> Iterator[tuple[str, str, RelatedQuestion, Comment | None, str | None]]:
    """Yield (query_id, candidate_id, relq, comment, raw_label) in file order."""
    if subtask == "A":
        for relq in thread.related:
            for comment in relq.comments:
                yield relq.id, comment.id, relq, comment, comment.relevance_to_relq
    elif subtask == "B":
        for relq in thread.related:
            yield thread.id, relq.id, relq, None, relq.relevance_to_orgq
    elif subtask == "C":
        for relq in thread.related:
            for comment in relq.comments:
                yield thread.id, comment.id, relq, comment, comment.relevance_to_orgq
    else:
        raise ValueError(f"unknown subtask '{subtask}'")


def _build_vector(
    views: _ThreadViews,
    subtask: str,
    query_id: str,
    candidate_id: str,
    relq: RelatedQuestion,
    comment: Comment | None,
    raw_label: str | None,
    res: FeatureResources,
) -> FeatureVector:
    values: dict[str, float] = {}
    for qdesc, cdesc in field_pairs_for_subtask(subtask):
        qkey = _field_key(qdesc, relq, comment)
        ckey = _field_key(cdesc, relq, comment)
        for measure in MEASURES:
            if measure in res.enabled:
                values[f"{measure}:{qdesc}~{cdesc}"] = _measure_value(
                    measure, views, qkey, ckey, res
                )
    if subtask in _RANK_SUBTASKS:
        rank = relq.search_rank
        values[SEARCH_RANK_FEATURE] = 1.0 / rank if rank else 0.0
    instance = Instance(
        query_id=query_id,
        candidate_id=candidate_id,
        subtask=subtask,
        gold_label=grade_label(raw_label) if raw_label else None,
        gold_positive=binarize_label(raw_label) if raw_label else None,
    )
    return FeatureVector(instance=instance, values=values)


def extract_all(thread: Thread, subtask: str, res: FeatureResources) -> list[FeatureVector]:
    """Feature vectors for every instance of one thread, in file order."""
    views = _ThreadViews(thread, res)
    return [
        _build_vector(views, subtask, qid, cid, relq, comment, label, res)
        for qid, cid, relq, comment, label in _instance_descriptors(thread, subtask)
    ]


def extract_features(
    thread: Thread,
    subtask: str,
    query_id: str,
    candidate_id: str,
    res: FeatureResources,
) -> FeatureVector:
    """Feature vector for one (query, candidate) pair named by ids."""
    views = _ThreadViews(thread, res)
    for qid, cid, relq, comment, label in _instance_descriptors(thread, subtask):
        if qid == query_id and cid == candidate_id:
            return _build_vector(views, subtask, qid, cid, relq, comment, label, res)
    raise DataError(
        f"no instance ({query_id}, {candidate_id}) for subtask {subtask} "
        f"in thread {thread.id}"
    )


def idf_document_views(threads: Sequence[Thread], lex: LexResources) -> list[TextView]:
    """One stemmed view per raw text field, the document unit for idf."""
    views = []
    for thread in threads:
        views.append(build_views(thread.subject, lex, STEMMED))
        views.append(build_views(thread.body, lex, STEMMED))
        for relq in thread.related:
            views.append(build_views(relq.subject, lex, STEMMED))
            views.append(build_views(relq.body, lex, STEMMED))
            for comment in relq.comments:
                views.append(build_views(comment.text, lex, STEMMED))
    return views


@dataclass(frozen=True)
class FeatureSchema:
    """Canonical feature order and per-feature normalization statistics."""

    names: tuple[str, ...]
    means: np.ndarray
    stds: np.ndarray

    def __len__(self) -> int:
        return len(self.names)


def fit_schema(train: Sequence[FeatureVector]) -> FeatureSchema:
    """Lexicographic name order, population mean/stddev over the training set."""
    if not train:
        raise DataError("cannot fit a feature schema on an empty training set")
    names = sorted(train[0].values.keys())
    name_set = set(names)
    for vector in train:
        if set(vector.values.keys()) != name_set:
            diff = sorted(name_set ^ set(vector.values.keys()))
            raise DataError(f"inconsistent feature names across vectors: {diff}")
    matrix = np.array([[v.values[n] for n in names] for v in train], dtype=np.float64)
    return FeatureSchema(
        names=tuple(names),
        means=matrix.mean(axis=0),
        stds=matrix.std(axis=0),
    )


def normalize(vector: FeatureVector, schema: FeatureSchema) -> np.ndarray:
    """Project onto the schema order and z-score; constant features map to 0."""
    raw = np.array(
        [vector.values.get(name, 0.0) for name in schema.names], dtype=np.float64
    )
    out = np.zeros(len(schema.names), dtype=np.float64)
    nonzero = schema.stds > 0.0
    out[nonzero] = (raw[nonzero] - schema.means[nonzero]) / schema.stds[nonzero]
    return out


def write_feature_dump(vectors: Iterable[FeatureVector], path: str | Path) -> None:
    """TSV dump `query_id<TAB>candidate_id<TAB>feature_name<TAB>value`."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for vector in vectors:
            inst = vector.instance
            for name in sorted(vector.values.keys()):
                fh.write(
                    f"{inst.query_id}\t{inst.candidate_id}\t{name}\t"
                    f"{vector.values[name]!r}\n"
                )
