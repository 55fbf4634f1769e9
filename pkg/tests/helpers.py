"""Shared test utilities: corpus writers, view and store builders."""
from __future__ import annotations

import json
from dataclasses import asdict

import numpy as np

from cqarank.corpus import Thread
from cqarank.embeddings import VectorStore
from cqarank.preprocess import TextView


def _strip_absent(obj):
    if isinstance(obj, dict):
        return {k: _strip_absent(v) for k, v in obj.items() if v is not None}
    if isinstance(obj, (list, tuple)):
        return [_strip_absent(v) for v in obj]
    return obj


def thread_to_dict(thread: Thread) -> dict:
    return _strip_absent(asdict(thread))


def write_corpus(threads, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for thread in threads:
            fh.write(json.dumps(thread_to_dict(thread)) + "\n")


def view(tokens, lemmas=None, stemmed=True) -> TextView:
    tokens = tuple(tokens)
    return TextView(
        tokens=tokens,
        lemmas=tuple(lemmas) if lemmas is not None else tokens,
        stemmed=stemmed,
        stopwords_removed=True,
    )


def make_store(vectors: dict) -> VectorStore:
    normalized = {}
    dim = len(next(iter(vectors.values())))
    for word, vec in vectors.items():
        arr = np.asarray(vec, dtype=np.float64)
        normalized[word] = arr / np.linalg.norm(arr)
    return VectorStore(dim=dim, vectors=normalized)


def planted_groups(rng, n_groups=50, members=10, dim=5, margin=1.0, w_star=None):
    """Separable ranking data: graded targets sit at 0, margin, 2*margin
    along a planted unit direction, with noise only in orthogonal dims."""
    from cqarank.ranker import QueryGroup

    if w_star is None:
        w_star = rng.normal(size=dim)
        w_star /= np.linalg.norm(w_star)
    groups = []
    for g in range(n_groups):
        grades = np.array([i % 3 for i in range(members)], dtype=np.int64)
        rng.shuffle(grades)
        base = rng.normal(size=(members, dim))
        base -= np.outer(base @ w_star, w_star)
        X = base + np.outer(grades * margin, w_star)
        groups.append(
            QueryGroup(
                query_id=f"g{g}",
                X=np.ascontiguousarray(X),
                grades=grades,
                gold=grades == 2,
            )
        )
    return groups, w_star


def pairwise_accuracy(w, groups) -> float:
    correct = total = 0
    for group in groups:
        scores = group.X @ w
        for i in range(len(group.grades)):
            for j in range(len(group.grades)):
                if group.grades[i] > group.grades[j]:
                    total += 1
                    if scores[i] > scores[j]:
                        correct += 1
    return correct / total
