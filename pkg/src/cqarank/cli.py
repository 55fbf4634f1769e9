"""Command-line front end: extract, train, predict, evaluate.

Exit codes: 0 success, 1 data/validation error, 2 configuration or I/O
error.  All commands are deterministic given the config and inputs; feature
extraction can fan out over processes without changing any output.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import _kernels
from .config import Config, load_config
from .corpus import Thread, export_predictions, load_corpus
from .errors import ConfigError, DataError
from .evaluation import evaluate_run
from .features import (
    FeatureResources,
    FeatureVector,
    extract_all,
    fit_schema,
    idf_document_views,
    normalize,
    write_feature_dump,
)
from .frames import load_frame_lexicon
from .kgraph import load_network
from .lexical import IdfTable, build_idf
from .preprocess import load_lex_resources
from .ranker import (
    RankModel,
    build_query_groups,
    calibrate_threshold,
    load_model,
    save_model,
    score,
    tune_cost,
    with_threshold,
)

log = logging.getLogger(__name__)

# set once per worker process so the resource bundle is pickled only once
_WORKER_STATE: dict = {}


def _load_resources(config: Config, idf: IdfTable) -> FeatureResources:
    return FeatureResources(
        lex=load_lex_resources(config.stopwords, config.lemma_table, config.noun_lexicon),
        idf=idf,
        store=_load_vectors(config),
        network=load_network(config.kg_edges, config.kg_senses),
        frame_lexicon=load_frame_lexicon(config.frame_lexicon),
        enabled=config.enabled_measures,
        cosine_word_n=config.cosine_word_n,
        ngram_overlap_n=config.ngram_overlap_n,
        kg_depth=config.kg_depth,
        kg_decay=config.kg_decay,
        cwasa_denominator=config.cwasa_denominator,
        centroid_unit_interval=config.centroid_unit_interval,
    )


def _load_vectors(config: Config):
    from .embeddings import load_vectors

    return load_vectors(config.embeddings)


def _worker_init(res: FeatureResources, subtask: str) -> None:
    _WORKER_STATE["res"] = res
    _WORKER_STATE["subtask"] = subtask


def _worker_extract(thread: Thread) -> list[FeatureVector]:
    return extract_all(thread, _WORKER_STATE["subtask"], _WORKER_STATE["res"])


def extract_corpus(
    threads: Sequence[Thread], subtask: str, res: FeatureResources, jobs: int = 1
) -> list[FeatureVector]:
    """Extract all instance vectors in corpus order, optionally in parallel."""
    if jobs <= 1 or len(threads) < 2:
        vectors = [v for thread in threads for v in extract_all(thread, subtask, res)]
    else:
        chunksize = max(1, len(threads) // (jobs * 4))
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_worker_init, initargs=(res, subtask)
        ) as pool:
            chunks = pool.map(_worker_extract, threads, chunksize=chunksize)
            vectors = [v for chunk in chunks for v in chunk]
    seen: set[tuple[str, str]] = set()
    for vector in vectors:
        key = (vector.instance.query_id, vector.instance.candidate_id)
        if key in seen:
            raise DataError(f"duplicate instance ({key[0]}, {key[1]}) across threads")
        seen.add(key)
    return vectors


def _build_idf(threads: Sequence[Thread], res_lex) -> IdfTable:
    return build_idf(idf_document_views(threads, res_lex))


def cmd_extract(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    threads = load_corpus(args.corpus)
    if not threads:
        Path(args.out).write_text("", encoding="utf-8")
        print("instances: 0")
        return 0
    lex = load_lex_resources(config.stopwords, config.lemma_table, config.noun_lexicon)
    idf = _build_idf(threads, lex)
    res = _load_resources(config, idf)
    vectors = extract_corpus(threads, args.subtask, res, args.jobs)
    write_feature_dump(vectors, args.out)
    per_instance = len(vectors[0].values) if vectors else 0
    print(f"instances: {len(vectors)}")
    print(f"features per instance: {per_instance}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    seed = args.seed if args.seed is not None else config.seed
    train_threads = load_corpus(args.train)
    dev_threads = load_corpus(args.dev)
    lex = load_lex_resources(config.stopwords, config.lemma_table, config.noun_lexicon)
    idf = _build_idf(train_threads, lex)
    res = _load_resources(config, idf)

    train_vectors = extract_corpus(train_threads, args.subtask, res, args.jobs)
    if not train_vectors:
        raise DataError("training corpus produced no instances")
    schema = fit_schema(train_vectors)
    train_groups = build_query_groups(train_vectors, schema)
    dev_vectors = extract_corpus(dev_threads, args.subtask, res, args.jobs)
    dev_groups = build_query_groups(dev_vectors, schema)

    runs = tune_cost(
        train_groups,
        dev_groups,
        grid=config.grid,
        seed=seed,
        epochs=config.epochs,
        schema=schema,
        subtask=args.subtask,
        idf=idf,
    )
    for run in runs:
        threshold = calibrate_threshold(run.model, dev_groups, config.threshold_metric)
        model = with_threshold(run.model, threshold)
        out_path = f"{args.out}.{run.label}"
        save_model(model, out_path)
        print(
            f"{run.label}: cost={model.cost:g} dev_map={run.dev_map:.4f} "
            f"threshold={threshold:.6f} -> {out_path}"
        )
    return 0


def _predict_rows(
    threads: Sequence[Thread],
    subtask: str,
    model: RankModel,
    res: FeatureResources,
    jobs: int,
):
    vectors = extract_corpus(threads, subtask, res, jobs)
    if vectors:
        extracted = set(vectors[0].values.keys())
        expected = set(model.schema.names)
        if extracted != expected:
            raise DataError(
                "schema mismatch: extracted features do not match the model "
                f"(model {len(expected)}, corpus {len(extracted)})"
            )
    scored = []
    for vector in vectors:
        value = score(model, normalize(vector, model.schema))
        scored.append((vector.instance, value, value >= model.threshold))
    # stable query blocks in corpus order, best score first inside each block
    by_query: dict[str, list] = {}
    for row in scored:
        by_query.setdefault(row[0].query_id, []).append(row)
    rows = []
    for query_rows in by_query.values():
        query_rows.sort(key=lambda r: (-r[1], r[0].candidate_id))
        rows.extend(query_rows)
    return rows


def cmd_predict(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    model = load_model(args.model)
    if model.subtask and model.subtask != args.subtask:
        raise DataError(
            f"schema mismatch: model trained for subtask {model.subtask}, "
            f"requested {args.subtask}"
        )
    if model.idf is None:
        raise DataError("model file lacks the idf table needed for extraction")
    threads = load_corpus(args.corpus)
    res = _load_resources(config, model.idf)
    rows = _predict_rows(threads, args.subtask, model, res, args.jobs)
    export_predictions(rows, args.out)
    print(f"wrote {len(rows)} predictions to {args.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    threads = load_corpus(args.gold)
    report = evaluate_run(threads, args.predictions, args.subtask)
    print(report.as_text())
    print(report.as_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqarank",
        description="Similarity features and pairwise ranking for CQA threads",
    )
    parser.add_argument(
        "--backend-info",
        action="store_true",
        help="print the selected kernel backend and exit",
    )
    sub = parser.add_subparsers(dest="command")

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument("--subtask", required=True, choices=["A", "B", "C"])
        p.add_argument("--jobs", type=int, default=1, help="extraction workers")

    p_extract = sub.add_parser("extract", help="dump instance features as TSV")
    add_common(p_extract)
    p_extract.add_argument("--corpus", required=True)
    p_extract.add_argument("--out", required=True)
    p_extract.set_defaults(func=cmd_extract)

    p_train = sub.add_parser("train", help="train primary and contrastive runs")
    add_common(p_train)
    p_train.add_argument("--train", required=True, help="labeled training corpus")
    p_train.add_argument("--dev", required=True, help="labeled development corpus")
    p_train.add_argument("--out", required=True, help="model path prefix")
    p_train.add_argument("--seed", type=int, default=None, help="override config seed")
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="score a corpus with a trained model")
    add_common(p_predict)
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--corpus", required=True)
    p_predict.add_argument("--out", required=True)
    p_predict.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="score predictions against gold labels")
    add_common(p_eval, config=False)
    p_eval.add_argument("--gold", required=True, help="labeled gold corpus")
    p_eval.add_argument("--predictions", required=True)
    p_eval.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend_info:
        print(f"kernel backend: {_kernels.BACKEND}")
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
