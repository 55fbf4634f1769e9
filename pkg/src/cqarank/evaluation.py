"""Ranking measures under the top-10 rule plus classification measures.

Queries without a single relevant candidate are excluded from the ranking
averages (and counted), while classification measures always cover every
instance.  Score ties rank by candidate id so evaluation is deterministic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import Thread, binarize_label
from .errors import ConfigError, DataError

TOP_K = 10


@dataclass(frozen=True)
class RankedQuery:
    query_id: str
    candidates: tuple[tuple[str, float, bool], ...]

    @property
    def relevant_count(self) -> int:
        return sum(1 for _, _, gold in self.candidates if gold)


def ranked_query(
    query_id: str, candidates: Sequence[tuple[str, float, bool]]
) -> RankedQuery:
    """Sort candidates by score descending, ties by candidate id ascending."""
    for cid, score, _ in candidates:
        if not math.isfinite(score):
            raise DataError(f"non-finite score for {cid}")
    ordered = tuple(sorted(candidates, key=lambda c: (-c[1], c[0])))
    return RankedQuery(query_id=query_id, candidates=ordered)


@dataclass(frozen=True)
class EvalReport:
    map_score: float
    avg_rec: float
    mrr: float
    accuracy: float
    precision: float
    recall: float
    f1: float
    query_count: int
    skipped_queries: int

    def as_text(self) -> str:
        lines = [
            f"MAP       {self.map_score:.4f}",
            f"AvgRec    {self.avg_rec:.4f}",
            f"MRR       {self.mrr:.4f}",
            f"Accuracy  {self.accuracy:.4f}",
            f"Precision {self.precision:.4f}",
            f"Recall    {self.recall:.4f}",
            f"F1        {self.f1:.4f}",
            f"queries   {self.query_count} ({self.skipped_queries} skipped)",
        ]
        return "\n".join(lines)

    def as_json(self) -> str:
        return json.dumps(
            {
                "map": self.map_score,
                "avg_rec": self.avg_rec,
                "mrr": self.mrr,
                "accuracy": self.accuracy,
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
                "query_count": self.query_count,
                "skipped_queries": self.skipped_queries,
            },
            sort_keys=True,
        )


def average_precision_from_flags(flags: Sequence[bool], k: int = TOP_K) -> float:
    """Truncated AP over relevance flags given in ranked order.

    The denominator min(R, k) makes a perfect ranking score 1 even when the
    query has more than k relevant candidates.
    """
    total_relevant = sum(1 for f in flags if f)
    if total_relevant == 0:
        raise DataError("average precision needs at least one relevant candidate")
    hits = 0
    ap_sum = 0.0
    for i, flag in enumerate(flags[:k], start=1):
        if flag:
            hits += 1
            ap_sum += hits / i
    return ap_sum / min(total_relevant, k)


def average_precision(query: RankedQuery, k: int = TOP_K) -> float:
    return average_precision_from_flags(
        [gold for _, _, gold in query.candidates], k=k
    )


def _recall_curve_mean(flags: Sequence[bool], k: int) -> float:
    total_relevant = sum(1 for f in flags if f)
    hits = 0
    acc = 0.0
    for i in range(1, k + 1):
        if i <= len(flags) and flags[i - 1]:
            hits += 1
        acc += hits / total_relevant
    return acc / k


def _reciprocal_rank(flags: Sequence[bool], k: int) -> float:
    for i, flag in enumerate(flags[:k], start=1):
        if flag:
            return 1.0 / i
    return 0.0


def _eligible(queries: Sequence[RankedQuery]) -> list[RankedQuery]:
    eligible = [q for q in queries if q.relevant_count > 0]
    if not eligible:
        raise DataError("no evaluable queries")
    return eligible


def map_score(queries: Sequence[RankedQuery], k: int = TOP_K) -> float:
    eligible = _eligible(queries)
    return sum(average_precision(q, k) for q in eligible) / len(eligible)


def avg_rec(queries: Sequence[RankedQuery], k: int = TOP_K) -> float:
    eligible = _eligible(queries)
    return sum(
        _recall_curve_mean([g for _, _, g in q.candidates], k) for q in eligible
    ) / len(eligible)


def mrr(queries: Sequence[RankedQuery], k: int = TOP_K) -> float:
    eligible = _eligible(queries)
    return sum(
        _reciprocal_rank([g for _, _, g in q.candidates], k) for q in eligible
    ) / len(eligible)


def classification_metrics(
    pairs: Sequence[tuple[bool, bool]],
) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f1) with the usual zero conventions."""
    if not pairs:
        raise DataError("classification metrics need at least one instance")
    tp = sum(1 for predicted, gold in pairs if predicted and gold)
    fp = sum(1 for predicted, gold in pairs if predicted and not gold)
    fn = sum(1 for predicted, gold in pairs if not predicted and gold)
    tn = len(pairs) - tp - fp - fn
    accuracy = (tp + tn) / len(pairs)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if precision + recall
        else 0.0
    )
    return accuracy, precision, recall, f1


def gold_instances(threads: Sequence[Thread], subtask: str) -> dict[tuple[str, str], str]:
    """Map (query_id, candidate_id) to the raw gold label for one subtask."""
    gold: dict[tuple[str, str], str] = {}
    for thread in threads:
        if subtask == "A":
            for relq in thread.related:
                for comment in relq.comments:
                    _require_label(comment.relevance_to_relq, relq.id, comment.id)
                    gold[(relq.id, comment.id)] = comment.relevance_to_relq
        elif subtask == "B":
            for relq in thread.related:
                _require_label(relq.relevance_to_orgq, thread.id, relq.id)
                gold[(thread.id, relq.id)] = relq.relevance_to_orgq
        elif subtask == "C":
            for relq in thread.related:
                for comment in relq.comments:
                    _require_label(comment.relevance_to_orgq, thread.id, comment.id)
                    gold[(thread.id, comment.id)] = comment.relevance_to_orgq
        else:
            raise ValueError(f"unknown subtask '{subtask}'")
    return gold


def _require_label(label: str | None, query_id: str, candidate_id: str) -> None:
    if label is None:
        raise DataError(f"unlabeled instance ({query_id}, {candidate_id})")


def load_predictions(path: str | Path) -> list[tuple[str, str, float, bool]]:
    """Parse the prediction TSV into (query_id, candidate_id, score, label).

    Format problems raise ConfigError (a broken file, not broken data), so
    the CLI reports them with the I/O exit code.
    """
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 5:
                raise ConfigError(f"line {lineno}: expected 5 tab-separated columns")
            query_id, candidate_id, _rank, raw_score, raw_label = parts
            try:
                score = float(raw_score)
            except ValueError:
                raise ConfigError(f"line {lineno}: non-numeric score") from None
            if not math.isfinite(score):
                raise ConfigError(f"line {lineno}: non-finite score")
            if raw_label not in ("true", "false"):
                raise ConfigError(f"line {lineno}: label must be 'true' or 'false'")
            rows.append((query_id, candidate_id, score, raw_label == "true"))
    return rows


def evaluate_run(
    threads: Sequence[Thread], predictions_path: str | Path, subtask: str
) -> EvalReport:
    """Score a prediction file against the gold corpus."""
    gold = gold_instances(threads, subtask)
    rows = load_predictions(predictions_path)

    seen: set[tuple[str, str]] = set()
    for query_id, candidate_id, _, _ in rows:
        key = (query_id, candidate_id)
        if key not in gold:
            raise DataError(f"unexpected instance ({query_id}, {candidate_id})")
        if key in seen:
            raise DataError(f"duplicate prediction for ({query_id}, {candidate_id})")
        seen.add(key)
    for key in gold:
        if key not in seen:
            raise DataError(f"missing prediction for ({key[0]}, {key[1]})")

    by_query: dict[str, list[tuple[str, float, bool]]] = {}
    pairs: list[tuple[bool, bool]] = []
    for query_id, candidate_id, score, predicted in rows:
        positive = binarize_label(gold[(query_id, candidate_id)])
        by_query.setdefault(query_id, []).append((candidate_id, score, positive))
        pairs.append((predicted, positive))

    queries = [ranked_query(qid, cands) for qid, cands in by_query.items()]
    eligible = [q for q in queries if q.relevant_count > 0]
    if not eligible:
        raise DataError("no evaluable queries")
    accuracy, precision, recall, f1 = classification_metrics(pairs)
    return EvalReport(
        map_score=map_score(queries),
        avg_rec=avg_rec(queries),
        mrr=mrr(queries),
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        query_count=len(queries),
        skipped_queries=len(queries) - len(eligible),
    )
