"""Pairwise linear ranking model.

Training minimizes 0.5*||w||^2 + C * sum over preference pairs of
max(0, 1 - w.(x_i - x_j)), with pairs drawn within query groups wherever
the graded target differs.  The optimizer is plain subgradient descent over
shuffled pairs with a 1/t-style step decay, fixed epoch count and seeded
shuffling, so identical inputs give bitwise-identical weights.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DataError
from .evaluation import average_precision_from_flags
from .features import FeatureSchema, FeatureVector, normalize
from .lexical import IdfTable

log = logging.getLogger(__name__)

DEFAULT_EPOCHS = 200
DEFAULT_GRID = tuple(2.0**k for k in range(-8, 9))
RUN_LABELS = ("primary", "contr1", "contr2")
MIN_COST_RATIO = 4.0

_FORMAT_VERSION = "cqarank model v1"


@dataclass
class QueryGroup:
    """All candidates ranked against one query.

    ``grades`` drive pair generation; ``gold`` is the binary relevance used
    for MAP and threshold selection.
    """

    query_id: str
    X: np.ndarray
    grades: np.ndarray
    gold: np.ndarray

    def __post_init__(self):
        if len(self.X) == 0:
            raise DataError(f"query group {self.query_id} has no members")
        if not (len(self.X) == len(self.grades) == len(self.gold)):
            raise DataError(f"query group {self.query_id} has ragged members")


@dataclass
class RankModel:
    w: np.ndarray
    schema: FeatureSchema
    cost: float
    threshold: float
    train_seed: int
    subtask: str = ""
    objective: float = 0.0
    idf: IdfTable | None = None


@dataclass
class TunedRun:
    label: str
    model: RankModel
    dev_map: float


def build_query_groups(
    vectors: Sequence[FeatureVector], schema: FeatureSchema
) -> list[QueryGroup]:
    """Group normalized instance vectors by query id, preserving order."""
    by_query: dict[str, list] = {}
    order: list[str] = []
    for vector in vectors:
        inst = vector.instance
        if inst.gold_label is None or inst.gold_positive is None:
            raise DataError(
                f"unlabeled instance ({inst.query_id}, {inst.candidate_id})"
            )
        if inst.query_id not in by_query:
            order.append(inst.query_id)
            by_query[inst.query_id] = []
        by_query[inst.query_id].append(
            (normalize(vector, schema), inst.gold_label, inst.gold_positive)
        )
    groups = []
    for query_id in order:
        rows = by_query[query_id]
        groups.append(
            QueryGroup(
                query_id=query_id,
                X=np.ascontiguousarray([r[0] for r in rows], dtype=np.float64),
                grades=np.array([r[1] for r in rows], dtype=np.int64),
                gold=np.array([r[2] for r in rows], dtype=bool),
            )
        )
    return groups


def _pair_diffs(groups: Sequence[QueryGroup]) -> np.ndarray:
    """Rows x_i - x_j for every within-group pair with grade_i > grade_j."""
    rows = []
    for group in groups:
        grades = group.grades
        for i in range(len(grades)):
            for j in range(len(grades)):
                if grades[i] > grades[j]:
                    rows.append(group.X[i] - group.X[j])
    if not rows:
        raise DataError("no ranking signal")
    return np.ascontiguousarray(rows, dtype=np.float64)


def objective_value(w: np.ndarray, diffs: np.ndarray, cost: float) -> float:
    hinge = np.maximum(0.0, 1.0 - diffs @ w).sum()
    return float(0.5 * np.dot(w, w) + cost * hinge)


def train(
    groups: Sequence[QueryGroup],
    cost: float,
    seed: int,
    epochs: int = DEFAULT_EPOCHS,
) -> tuple[np.ndarray, float]:
    """Fit the weight vector; returns (w, final objective value)."""
    if cost <= 0:
        raise ValueError("cost must be positive")
    diffs = _pair_diffs(groups)
    dim = diffs.shape[1]
    w = np.zeros(dim, dtype=np.float64)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        order = rng.permutation(diffs.shape[0]).astype(np.int64)
        t = _kernels.rank_hinge_epoch(w, diffs, order, float(cost), t)
    return w, objective_value(w, diffs, cost)


def score(model: RankModel, x: np.ndarray) -> float:
    """w.x; the relevance label is score >= threshold."""
    if len(x) != len(model.w):
        raise DataError(
            f"feature vector length {len(x)} does not match model ({len(model.w)})"
        )
    return float(np.dot(model.w, x))


def group_scores(w: np.ndarray, group: QueryGroup) -> np.ndarray:
    return group.X @ w


def mean_average_precision(
    w: np.ndarray, groups: Sequence[QueryGroup], k: int = 10
) -> float:
    """Dev MAP under the top-k rule; groups without positives are skipped."""
    ap_values = []
    for group in groups:
        if not group.gold.any():
            continue
        ranking = np.argsort(-group_scores(w, group), kind="stable")
        flags = [bool(group.gold[i]) for i in ranking]
        ap_values.append(average_precision_from_flags(flags, k=k))
    if not ap_values:
        raise DataError("no evaluable queries")
    return float(np.mean(ap_values))


def tune_cost(
    train_groups: Sequence[QueryGroup],
    dev_groups: Sequence[QueryGroup],
    grid: Sequence[float] | None = None,
    seed: int = 0,
    epochs: int = DEFAULT_EPOCHS,
    schema: FeatureSchema | None = None,
    subtask: str = "",
    idf: IdfTable | None = None,
) -> list[TunedRun]:
    """Train per grid cost, rank by dev MAP and keep up to three runs whose
    costs are pairwise at least a factor MIN_COST_RATIO apart."""
    grid = tuple(grid) if grid is not None else DEFAULT_GRID
    if not grid:
        raise ValueError("cost grid is empty")
    results = []
    for cost in grid:
        w, objective = train(train_groups, cost, seed, epochs)
        dev_map = mean_average_precision(w, dev_groups)
        results.append((cost, w, objective, dev_map))
    # best dev MAP first, ties broken by the smaller cost
    results.sort(key=lambda r: (-r[3], r[0]))
    selected: list[tuple[float, np.ndarray, float, float]] = []
    for cost, w, objective, dev_map in results:
        if len(selected) == len(RUN_LABELS):
            break
        if all(
            max(cost, s[0]) / min(cost, s[0]) >= MIN_COST_RATIO for s in selected
        ):
            selected.append((cost, w, objective, dev_map))
    if len(selected) < len(RUN_LABELS):
        log.warning(
            "cost grid yielded only %d sufficiently distant runs (wanted %d)",
            len(selected),
            len(RUN_LABELS),
        )
    runs = []
    for label, (cost, w, objective, dev_map) in zip(RUN_LABELS, selected):
        model = RankModel(
            w=w,
            schema=schema,
            cost=cost,
            threshold=0.0,
            train_seed=seed,
            subtask=subtask,
            objective=objective,
            idf=idf,
        )
        runs.append(TunedRun(label=label, model=model, dev_map=dev_map))
    return runs


def _f1(predicted: np.ndarray, gold: np.ndarray) -> float:
    tp = int(np.sum(predicted & gold))
    fp = int(np.sum(predicted & ~gold))
    fn = int(np.sum(~predicted & gold))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _accuracy(predicted: np.ndarray, gold: np.ndarray) -> float:
    return float(np.mean(predicted == gold))


def calibrate_threshold(
    model: RankModel,
    dev_groups: Sequence[QueryGroup],
    metric: str = "f1",
) -> float:
    """Pick the score cutoff maximizing dev F1 (or accuracy).

    Candidates are the midpoints between consecutive distinct dev scores
    plus one value below and one above all scores; ties take the smallest.
    """
    if metric not in ("f1", "accuracy"):
        raise ValueError(f"unknown threshold metric '{metric}'")
    scores = np.concatenate([group_scores(model.w, g) for g in dev_groups])
    gold = np.concatenate([g.gold for g in dev_groups])
    if len(scores) == 0:
        raise DataError("no dev instances for threshold calibration")
    if not gold.any():
        log.warning("no positive dev instance; threshold set above all scores")
        return float(scores.max() + 1.0)
    distinct = np.unique(scores)
    candidates = [float(distinct[0] - 1.0)]
    candidates.extend(
        float((distinct[i] + distinct[i + 1]) / 2.0) for i in range(len(distinct) - 1)
    )
    candidates.append(float(distinct[-1] + 1.0))
    objective = _f1 if metric == "f1" else _accuracy
    best_theta = candidates[0]
    best_value = -1.0
    for theta in candidates:
        value = objective(scores >= theta, gold)
        if value > best_value or (value == best_value and theta < best_theta):
            best_value = value
            best_theta = theta
    return best_theta


def _format_float(x: float) -> str:
    return repr(float(x))


def save_model(model: RankModel, path: str | Path) -> None:
    """Versioned line-oriented text dump; floats keep full precision."""
    if model.schema is None:
        raise DataError("cannot save a model without a feature schema")
    lines = [_FORMAT_VERSION]
    lines.append("[meta]")
    lines.append(f"subtask\t{model.subtask}")
    lines.append(f"cost\t{_format_float(model.cost)}")
    lines.append(f"threshold\t{_format_float(model.threshold)}")
    lines.append(f"seed\t{model.train_seed}")
    lines.append(f"objective\t{_format_float(model.objective)}")
    lines.append("[schema]")
    for name, mean, std in zip(model.schema.names, model.schema.means, model.schema.stds):
        lines.append(f"{name}\t{_format_float(mean)}\t{_format_float(std)}")
    lines.append("[weights]")
    for value in model.w:
        lines.append(_format_float(value))
    lines.append("[idf]")
    if model.idf is not None:
        lines.append(f"doc_count\t{model.idf.doc_count}")
        for term in sorted(model.idf.df):
            lines.append(f"{term}\t{model.idf.df[term]}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path: str | Path) -> RankModel:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError("line 1: empty model file")
    if lines[0] != _FORMAT_VERSION:
        raise DataError(
            f"line 1: expected version '{_FORMAT_VERSION}', found '{lines[0]}'"
        )

    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            if current in sections:
                raise DataError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            raise DataError(f"line {lineno}: content before first section")
        else:
            sections[current].append((lineno, line))
    for required in ("meta", "schema", "weights", "idf"):
        if required not in sections:
            raise DataError(f"truncated model file: missing section [{required}]")

    meta: dict[str, str] = {}
    for lineno, line in sections["meta"]:
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"line {lineno}: malformed meta entry")
        meta[parts[0]] = parts[1]
    try:
        cost = float(meta["cost"])
        threshold = float(meta["threshold"])
        seed = int(meta["seed"])
        objective = float(meta.get("objective", "0.0"))
        subtask = meta.get("subtask", "")
    except (KeyError, ValueError) as exc:
        raise DataError(f"invalid model meta: {exc}") from None

    names, means, stds = [], [], []
    for lineno, line in sections["schema"]:
        parts = line.split("\t")
        if len(parts) != 3:
            raise DataError(f"line {lineno}: malformed schema entry")
        try:
            names.append(parts[0])
            means.append(float(parts[1]))
            stds.append(float(parts[2]))
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric schema statistic") from None
    schema = FeatureSchema(
        names=tuple(names),
        means=np.array(means, dtype=np.float64),
        stds=np.array(stds, dtype=np.float64),
    )

    weights = []
    for lineno, line in sections["weights"]:
        try:
            weights.append(float(line))
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric weight") from None
    if len(weights) != len(names):
        raise DataError(
            f"truncated model file: {len(weights)} weights for {len(names)} features"
        )

    idf: IdfTable | None = None
    idf_lines = sections["idf"]
    if idf_lines:
        first_lineno, first_line = idf_lines[0]
        parts = first_line.split("\t")
        if len(parts) != 2 or parts[0] != "doc_count":
            raise DataError(f"line {first_lineno}: expected doc_count entry")
        try:
            doc_count = int(parts[1])
        except ValueError:
            raise DataError(f"line {first_lineno}: non-integer doc_count") from None
        df: dict[str, int] = {}
        for lineno, line in idf_lines[1:]:
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"line {lineno}: malformed idf entry")
            try:
                df[parts[0]] = int(parts[1])
            except ValueError:
                raise DataError(f"line {lineno}: non-integer document frequency") from None
        idf = IdfTable(doc_count=doc_count, df=df)

    return RankModel(
        w=np.array(weights, dtype=np.float64),
        schema=schema,
        cost=cost,
        threshold=threshold,
        train_seed=seed,
        subtask=subtask,
        objective=objective,
        idf=idf,
    )


def with_threshold(model: RankModel, threshold: float) -> RankModel:
    return replace(model, threshold=threshold)
