"""Thread data model, JSONL ingestion, relevance-label semantics and the
prediction-file emitter.

A corpus file holds one thread per line: an original question, its related
questions (each with an optional search-engine rank and relevance label) and
the comments posted under each related question.  Comments carry up to two
labels because their relevance is judged both against the related question
they answer and against the original question.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import DataError

QUESTION_LABELS = ("PerfectMatch", "Relevant", "Irrelevant")
COMMENT_LABELS = ("Good", "PotentiallyUseful", "Bad")

_BINARIZE = {
    "PerfectMatch": True,
    "Relevant": True,
    "Irrelevant": False,
    "Good": True,
    "PotentiallyUseful": False,
    "Bad": False,
}

_GRADE = {
    "PerfectMatch": 2,
    "Relevant": 1,
    "Irrelevant": 0,
    "Good": 2,
    "PotentiallyUseful": 1,
    "Bad": 0,
}

SUBTASKS = ("A", "B", "C")


@dataclass(frozen=True)
class Comment:
    id: str
    text: str
    relevance_to_relq: str | None = None
    relevance_to_orgq: str | None = None


@dataclass(frozen=True)
class RelatedQuestion:
    id: str
    subject: str
    body: str
    relevance_to_orgq: str | None = None
    search_rank: int | None = None
    comments: tuple[Comment, ...] = ()


@dataclass(frozen=True)
class Thread:
    id: str
    subject: str
    body: str
    related: tuple[RelatedQuestion, ...] = ()


@dataclass(frozen=True)
class Instance:
    """One (query, candidate) pair of a subtask dataset.

    ``gold_label`` is the graded target (2/1/0) and ``gold_positive`` the
    binary relevance derived from the raw label's own scale; both are None
    for unlabeled data.
    """

    query_id: str
    candidate_id: str
    subtask: str
    gold_label: int | None = None
    gold_positive: bool | None = None


def binarize_label(label: str) -> bool:
    """Map a graded relevance label to binary relevance.

    PerfectMatch and Relevant count as true on the question scale; on the
    comment scale only Good does.
    """
    try:
        return _BINARIZE[label]
    except KeyError:
        raise DataError(f"unknown relevance label '{label}'") from None


def grade_label(label: str) -> int:
    """Map a relevance label to its ordinal grade (2 best, 0 worst)."""
    try:
        return _GRADE[label]
    except KeyError:
        raise DataError(f"unknown relevance label '{label}'") from None


def _req_str(obj: dict, key: str, lineno: int, where: str = "") -> str:
    suffix = f" in {where}" if where else ""
    if key not in obj or obj[key] is None:
        raise DataError(f"line {lineno}: missing field {key}{suffix}")
    value = obj[key]
    if not isinstance(value, str):
        raise DataError(f"line {lineno}: field {key}{suffix} must be a string")
    return value


def _req_id(obj: dict, lineno: int, where: str = "") -> str:
    value = _req_str(obj, "id", lineno, where)
    if not value:
        suffix = f" in {where}" if where else ""
        raise DataError(f"line {lineno}: field id{suffix} must be non-empty")
    return value


def _opt_label(obj: dict, key: str, allowed: tuple[str, ...], lineno: int, where: str) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    if value not in allowed:
        raise DataError(
            f"line {lineno}: field {key} in {where} must be one of {'/'.join(allowed)}, got '{value}'"
        )
    return value


def _parse_comment(obj: dict, lineno: int, relq_id: str) -> Comment:
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: comment entries must be objects")
    where = f"comment of {relq_id}"
    cid = _req_id(obj, lineno, where)
    return Comment(
        id=cid,
        text=_req_str(obj, "text", lineno, f"comment {cid}"),
        relevance_to_relq=_opt_label(obj, "relevance_to_relq", COMMENT_LABELS, lineno, f"comment {cid}"),
        relevance_to_orgq=_opt_label(obj, "relevance_to_orgq", COMMENT_LABELS, lineno, f"comment {cid}"),
    )


def _parse_related(obj: dict, lineno: int, thread_id: str) -> RelatedQuestion:
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: related entries must be objects")
    rid = _req_id(obj, lineno, f"related question of {thread_id}")
    rank = obj.get("search_rank")
    if rank is not None:
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
            raise DataError(f"line {lineno}: search_rank of {rid} must be an integer >= 1")
    raw_comments = obj.get("comments", [])
    if not isinstance(raw_comments, list):
        raise DataError(f"line {lineno}: field comments of {rid} must be a list")
    comments = tuple(_parse_comment(c, lineno, rid) for c in raw_comments)
    seen = set()
    for comment in comments:
        if comment.id in seen:
            raise DataError(f"line {lineno}: duplicate comment id '{comment.id}' in {rid}")
        seen.add(comment.id)
    return RelatedQuestion(
        id=rid,
        subject=_req_str(obj, "subject", lineno, rid),
        body=_req_str(obj, "body", lineno, rid),
        relevance_to_orgq=_opt_label(obj, "relevance_to_orgq", QUESTION_LABELS, lineno, rid),
        search_rank=rank,
        comments=comments,
    )


def _parse_thread(obj: dict, lineno: int) -> Thread:
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: thread must be a JSON object")
    tid = _req_id(obj, lineno)
    raw_related = obj.get("related", [])
    if not isinstance(raw_related, list):
        raise DataError(f"line {lineno}: field related must be a list")
    related = tuple(_parse_related(r, lineno, tid) for r in raw_related)
    seen = set()
    for relq in related:
        if relq.id in seen:
            raise DataError(f"line {lineno}: duplicate related question id '{relq.id}' in {tid}")
        seen.add(relq.id)
    return Thread(
        id=tid,
        subject=_req_str(obj, "subject", lineno),
        body=_req_str(obj, "body", lineno),
        related=related,
    )


def load_corpus(path: str | Path) -> list[Thread]:
    """Parse a JSONL thread corpus, preserving file order.

    Raises DataError with the offending line number for malformed lines and
    for duplicate thread ids.
    """
    threads: list[Thread] = []
    seen_ids: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            thread = _parse_thread(obj, lineno)
            if thread.id in seen_ids:
                raise DataError(
                    f"line {lineno}: duplicate thread id '{thread.id}' "
                    f"(first seen on line {seen_ids[thread.id]})"
                )
            seen_ids[thread.id] = lineno
            threads.append(thread)
    return threads


def format_score(score: float) -> str:
    """Render a score with at least six significant digits."""
    if score != 0.0 and abs(score) < 0.1:
        return f"{score:.6e}"
    return f"{score:.6f}"


def export_predictions(
    rows: Iterable[tuple[Instance, float, bool]], path: str | Path
) -> None:
    """Write predictions in the official TSV format.

    One line per instance: query id, candidate id, a constant 0 rank column,
    the score and the true/false relevance label.  Input order is preserved.
    """
    lines = []
    for instance, score, label in rows:
        if not math.isfinite(score):
            raise DataError(f"non-finite score for {instance.candidate_id}")
        lines.append(
            f"{instance.query_id}\t{instance.candidate_id}\t0\t"
            f"{format_score(score)}\t{'true' if label else 'false'}\n"
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.writelines(lines)
