"""Word-vector store and the two distributed-representation measures.

Vectors are L2-normalized at load so every cosine is a plain dot product.
Both measures look up the lemmas of the unstemmed view; out-of-vocabulary
lemmas are skipped, and a view with no known lemma scores 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from ._kernels import pure as _pure_kernels
from .errors import DataError
from .preprocess import TextView

log = logging.getLogger(__name__)

DENOMINATOR_INVOCAB = "invocab"
DENOMINATOR_ALL = "all"

# Above this many multiply-adds per pair the BLAS matmul in the fallback
# beats the compiled scalar loop (see benchmarks/bench_kernels.py), so the
# alignment total dispatches on problem size.
_MATMUL_CROSSOVER_OPS = 20_000


@dataclass
class VectorStore:
    dim: int
    vectors: dict[str, np.ndarray] = field(default_factory=dict)
    duplicates: int = 0

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def matrix_for(self, lemmas) -> np.ndarray | None:
        """Stack the vectors of in-vocabulary lemmas, multiplicity kept."""
        rows = [self.vectors[l] for l in lemmas if l in self.vectors]
        if not rows:
            return None
        return np.ascontiguousarray(np.vstack(rows))


def load_vectors(path: str | Path) -> VectorStore:
    """Read the textual vector format: a `<count> <dim>` header, then one
    `<word> <v1> ... <vd>` line per word.  Duplicate words keep the last
    occurrence and are counted."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise DataError("line 1: header must be '<vocab_size> <dim>'")
        try:
            vocab_size, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError("line 1: header must be '<vocab_size> <dim>'") from None
        if vocab_size < 0 or dim < 1:
            raise DataError("line 1: vocab size and dimension must be positive")

        vectors: dict[str, np.ndarray] = {}
        duplicates = 0
        count = 0
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split(" ")
            fields = [f for f in fields if f]
            if len(fields) != dim + 1:
                raise DataError(f"line {lineno}: expected {dim} components")
            word = fields[0]
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError:
                raise DataError(f"line {lineno}: non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise DataError(f"line {lineno}: non-finite component")
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:
                raise DataError(f"line {lineno}: zero vector for word '{word}'")
            if word in vectors:
                duplicates += 1
            vectors[word] = vec / norm
            count += 1
        if count != vocab_size:
            raise DataError(
                f"header declares {vocab_size} vectors but file has {count}"
            )
    if duplicates:
        log.warning("vector file %s: %d duplicate words, last kept", path, duplicates)
    return VectorStore(dim=dim, vectors=vectors, duplicates=duplicates)


def centroid_similarity(
    a: TextView, b: TextView, store: VectorStore, map_to_unit: bool = False
) -> float:
    """Cosine of the mean word vectors of the two views.

    Raw cosine in [-1, 1] by default; with map_to_unit the score is rescaled
    to [0, 1] via (cos + 1) / 2.
    """
    mat_a = store.matrix_for(a.lemmas)
    mat_b = store.matrix_for(b.lemmas)
    if mat_a is None or mat_b is None:
        return 0.0
    centroid_a = mat_a.mean(axis=0)
    centroid_b = mat_b.mean(axis=0)
    norm_a = float(np.linalg.norm(centroid_a))
    norm_b = float(np.linalg.norm(centroid_b))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    cos = float(np.dot(centroid_a, centroid_b) / (norm_a * norm_b))
    cos = max(-1.0, min(1.0, cos))
    return (cos + 1.0) / 2.0 if map_to_unit else cos


def cwasa_similarity(
    a: TextView,
    b: TextView,
    store: VectorStore,
    denominator: str = DENOMINATOR_INVOCAB,
) -> float:
    """Bidirectional best-match word alignment score in [0, 1].

    Every in-vocabulary token of one view is aligned with its highest-cosine
    counterpart in the other view (negative alignments clip to 0) and the
    matched cosines are averaged over both directions.
    """
    if denominator not in (DENOMINATOR_INVOCAB, DENOMINATOR_ALL):
        raise ValueError(f"unknown cwasa denominator '{denominator}'")
    mat_a = store.matrix_for(a.lemmas)
    mat_b = store.matrix_for(b.lemmas)
    if mat_a is None or mat_b is None:
        return 0.0
    ops = mat_a.shape[0] * mat_b.shape[0] * store.dim
    if ops > _MATMUL_CROSSOVER_OPS:
        total = _pure_kernels.cwasa_match_total(mat_a, mat_b)
    else:
        total = _kernels.cwasa_match_total(mat_a, mat_b)
    if denominator == DENOMINATOR_ALL:
        denom = len(a.lemmas) + len(b.lemmas)
    else:
        denom = mat_a.shape[0] + mat_b.shape[0]
    return min(1.0, total / denom)
