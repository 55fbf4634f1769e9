import json

import numpy as np
import pytest

from cqarank.corpus import Comment, RelatedQuestion, Thread, export_predictions, Instance
from cqarank.errors import DataError
from cqarank.evaluation import (
    EvalReport,
    average_precision,
    avg_rec,
    classification_metrics,
    evaluate_run,
    load_predictions,
    map_score,
    mrr,
    ranked_query,
)

from oracles import (
    ap_oracle,
    avgrec_oracle,
    classification_oracle,
    rank_by_score,
    rr_oracle,
)


def query_from_flags(flags, qid="q"):
    # scores decreasing so the given order is the ranked order
    return ranked_query(
        qid, [(f"c{i}", float(len(flags) - i), bool(f)) for i, f in enumerate(flags)]
    )


def test_ranked_query_sorts_and_breaks_ties_by_id():
    q = ranked_query(
        "q",
        [("b", 1.0, False), ("a", 1.0, True), ("c", 2.0, False)],
    )
    assert [c[0] for c in q.candidates] == ["c", "a", "b"]


def test_ranked_query_rejects_nan():
    with pytest.raises(DataError):
        ranked_query("q", [("a", float("nan"), True)])


def test_average_precision_examples():
    assert average_precision(query_from_flags([1, 0, 1])) == pytest.approx(
        (1 / 1 + 2 / 3) / 2
    )
    assert average_precision(query_from_flags([1, 1, 1])) == pytest.approx(1.0)
    flags = [0] * 10 + [1]
    assert average_precision(query_from_flags(flags)) == 0.0


def test_average_precision_denominator_min_r_k():
    # 12 relevant, perfectly ranked: truncated AP still reaches 1
    assert average_precision(query_from_flags([1] * 12 + [0] * 3)) == pytest.approx(1.0)


def test_map_mrr_avgrec_single_query_examples():
    q = query_from_flags([1])
    assert map_score([q]) == 1.0
    assert mrr([q]) == 1.0
    assert avg_rec([q]) == pytest.approx(1.0)

    q2 = query_from_flags([0, 1])
    assert mrr([q2]) == pytest.approx(0.5)

    q3 = query_from_flags([0, 1, 1])
    assert avg_rec([q3]) == pytest.approx(0.85)
    assert avgrec_oracle([False, True, True]) == pytest.approx(0.85)


def test_rank_measures_skip_queries_without_positives():
    with_pos = query_from_flags([0, 1])
    without = query_from_flags([0, 0])
    assert map_score([with_pos, without]) == map_score([with_pos])
    with pytest.raises(DataError, match="no evaluable queries"):
        map_score([without])


def test_classification_metrics_examples():
    perfect = [(True, True), (False, False)]
    assert classification_metrics(perfect) == (1.0, 1.0, 1.0, 1.0)

    all_false = [(False, True), (False, False), (False, True), (False, False)]
    assert classification_metrics(all_false) == (0.5, 0.0, 0.0, 0.0)

    mixed = [(True, True), (True, False), (False, True), (False, False)]
    assert classification_metrics(mixed) == (0.5, 0.5, 0.5, 0.5)

    with pytest.raises(DataError):
        classification_metrics([])


def test_classification_matches_oracle(rng):
    for _ in range(200):
        pairs = [
            (bool(rng.integers(2)), bool(rng.integers(2)))
            for _ in range(int(rng.integers(1, 20)))
        ]
        assert classification_metrics(pairs) == pytest.approx(
            classification_oracle(pairs)
        )


def test_measures_match_prefix_loop_oracles(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 16))
        flags = [bool(rng.random() < 0.4) for _ in range(n)]
        if not any(flags):
            flags[int(rng.integers(0, n))] = True
        q = query_from_flags(flags)
        assert average_precision(q) == ap_oracle(flags)
        assert mrr([q]) == rr_oracle(flags)
        assert avg_rec([q]) == avgrec_oracle(flags)


def test_measures_affine_invariant(rng):
    for _ in range(50):
        n = int(rng.integers(2, 12))
        scores = rng.normal(size=n)
        flags = rng.random(n) < 0.5
        if not flags.any():
            flags[0] = True
        items = [(f"c{i}", float(scores[i]), bool(flags[i])) for i in range(n)]
        scale = float(rng.uniform(0.1, 10))
        shift = float(rng.normal() * 100)
        shifted = [(cid, scale * s + shift, g) for cid, s, g in items]
        base = (
            map_score([ranked_query("q", items)]),
            avg_rec([ranked_query("q", items)]),
            mrr([ranked_query("q", items)]),
        )
        moved = (
            map_score([ranked_query("q", shifted)]),
            avg_rec([ranked_query("q", shifted)]),
            mrr([ranked_query("q", shifted)]),
        )
        assert base == pytest.approx(moved, abs=1e-15)


def test_ap_is_one_iff_positives_on_top(rng):
    for _ in range(200):
        n = int(rng.integers(1, 12))
        flags = [bool(rng.random() < 0.5) for _ in range(n)]
        if not any(flags):
            flags[0] = True
        ap = average_precision(query_from_flags(flags))
        relevant = sum(flags)
        expect_one = all(flags[: min(relevant, 10)])
        assert ap <= 1.0 + 1e-15
        assert (abs(ap - 1.0) < 1e-15) == expect_one


GOLD_THREADS = [
    Thread(
        id="T1",
        subject="s",
        body="b",
        related=(
            RelatedQuestion(
                id="T1_R1",
                subject="s",
                body="b",
                relevance_to_orgq="Relevant",
                comments=(
                    Comment(
                        id="T1_R1_C1", text="x",
                        relevance_to_relq="Good", relevance_to_orgq="Bad",
                    ),
                    Comment(
                        id="T1_R1_C2", text="y",
                        relevance_to_relq="Bad", relevance_to_orgq="Good",
                    ),
                ),
            ),
            RelatedQuestion(
                id="T1_R2",
                subject="s",
                body="b",
                relevance_to_orgq="Irrelevant",
                comments=(
                    Comment(
                        id="T1_R2_C1", text="z",
                        relevance_to_relq="PotentiallyUseful",
                        relevance_to_orgq="Bad",
                    ),
                ),
            ),
        ),
    ),
]


def _write_predictions(path, rows):
    export_predictions(
        [
            (Instance(query_id=qid, candidate_id=cid, subtask="A"), score, label)
            for qid, cid, score, label in rows
        ],
        path,
    )


def test_evaluate_run_perfect_predictions(tmp_path):
    path = tmp_path / "pred.tsv"
    _write_predictions(
        path,
        [
            ("T1_R1", "T1_R1_C1", 0.9, True),
            ("T1_R1", "T1_R1_C2", 0.1, False),
            ("T1_R2", "T1_R2_C1", 0.2, False),
        ],
    )
    report = evaluate_run(GOLD_THREADS, path, "A")
    assert report.map_score == 1.0
    assert report.avg_rec == 1.0
    assert report.mrr == 1.0
    assert report.accuracy == 1.0
    # the all-negative query T1_R2 is skipped from ranking averages
    assert report.query_count == 2 and report.skipped_queries == 1


def test_evaluate_run_missing_instance(tmp_path):
    path = tmp_path / "pred.tsv"
    _write_predictions(path, [("T1_R1", "T1_R1_C1", 0.9, True)])
    with pytest.raises(DataError, match=r"missing prediction for \(T1_R1, T1_R1_C2\)"):
        evaluate_run(GOLD_THREADS, path, "A")


def test_evaluate_run_extra_instance(tmp_path):
    path = tmp_path / "pred.tsv"
    _write_predictions(
        path,
        [
            ("T1_R1", "T1_R1_C1", 0.9, True),
            ("T1_R1", "T1_R1_C2", 0.1, False),
            ("T1_R2", "T1_R2_C1", 0.2, False),
            ("T1_R9", "ghost", 0.5, True),
        ],
    )
    with pytest.raises(DataError, match="ghost"):
        evaluate_run(GOLD_THREADS, path, "A")


def test_evaluate_run_subtask_b_uses_question_scale(tmp_path):
    path = tmp_path / "pred.tsv"
    _write_predictions(
        path,
        [("T1", "T1_R1", 0.4, True), ("T1", "T1_R2", 0.6, False)],
    )
    report = evaluate_run(GOLD_THREADS, path, "B")
    # the Relevant question is ranked second of two
    assert report.map_score == pytest.approx(0.5)
    assert report.mrr == pytest.approx(0.5)


def test_evaluate_run_matches_oracle_on_random_fixture(tmp_path, rng):
    rows = []
    gold_flags = {}
    for relq in GOLD_THREADS[0].related:
        for comment in relq.comments:
            score = float(np.round(rng.normal(), 3))
            label = bool(rng.integers(2))
            rows.append((relq.id, comment.id, score, label))
            gold_flags[(relq.id, comment.id)] = comment.relevance_to_relq == "Good"
    path = tmp_path / "pred.tsv"
    _write_predictions(path, rows)
    report = evaluate_run(GOLD_THREADS, path, "A")

    by_query = {}
    pairs = []
    for qid, cid, score, label in rows:
        by_query.setdefault(qid, []).append((cid, score, gold_flags[(qid, cid)]))
        pairs.append((label, gold_flags[(qid, cid)]))
    ap_values, rr_values, rec_values = [], [], []
    for items in by_query.values():
        flags = rank_by_score(items)
        if not any(flags):
            continue
        ap_values.append(ap_oracle(flags))
        rr_values.append(rr_oracle(flags))
        rec_values.append(avgrec_oracle(flags))
    assert report.map_score == pytest.approx(np.mean(ap_values), abs=1e-15)
    assert report.mrr == pytest.approx(np.mean(rr_values), abs=1e-15)
    assert report.avg_rec == pytest.approx(np.mean(rec_values), abs=1e-15)
    acc, p, r, f1 = classification_oracle(pairs)
    assert (report.accuracy, report.precision, report.recall, report.f1) == (
        pytest.approx(acc), pytest.approx(p), pytest.approx(r), pytest.approx(f1),
    )


def test_load_predictions_malformed_line(tmp_path):
    from cqarank.errors import ConfigError

    path = tmp_path / "pred.tsv"
    path.write_text("a\tb\t0\t0.5\ttrue\nbroken line\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="line 2"):
        load_predictions(path)


def test_load_predictions_bad_label(tmp_path):
    from cqarank.errors import ConfigError

    path = tmp_path / "pred.tsv"
    path.write_text("a\tb\t0\t0.5\tyes\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="line 1.*true"):
        load_predictions(path)


def test_report_rendering():
    report = EvalReport(
        map_score=0.5, avg_rec=0.25, mrr=0.75, accuracy=0.5,
        precision=0.5, recall=1 / 3, f1=0.4, query_count=3, skipped_queries=1,
    )
    text = report.as_text()
    assert "MAP       0.5000" in text
    assert "queries   3 (1 skipped)" in text
    parsed = json.loads(report.as_json())
    assert parsed["map"] == 0.5 and parsed["skipped_queries"] == 1
