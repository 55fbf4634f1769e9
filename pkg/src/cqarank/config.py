"""YAML configuration: resource file paths, hyperparameters, measure flags.

Relative resource paths are resolved against the config file's directory so
a config travels with its fixture data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .features import MEASURES
from .kgraph import MAX_DEPTH
from .ranker import DEFAULT_EPOCHS, DEFAULT_GRID

_RESOURCE_KEYS = (
    "stopwords",
    "lemma_table",
    "noun_lexicon",
    "embeddings",
    "kg_edges",
    "kg_senses",
    "frame_lexicon",
)

DEFAULT_SEED = 13


@dataclass
class Config:
    stopwords: Path
    lemma_table: Path
    noun_lexicon: Path
    embeddings: Path
    kg_edges: Path
    kg_senses: Path
    frame_lexicon: Path
    kg_depth: int = 2
    kg_decay: float = 0.5
    grid: tuple[float, ...] = DEFAULT_GRID
    epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED
    threshold_metric: str = "f1"
    enabled_measures: frozenset[str] = field(default_factory=lambda: frozenset(MEASURES))
    cosine_word_n: int = 1
    ngram_overlap_n: int = 2
    cwasa_denominator: str = "invocab"
    centroid_unit_interval: bool = False

    def resource_paths(self) -> dict[str, Path]:
        return {key: getattr(self, key) for key in _RESOURCE_KEYS}


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping")
    _check_keys(
        raw,
        {"resources", "kg", "ranker", "measures", "cwasa_denominator", "centroid_unit_interval"},
        "config",
    )

    resources = raw.get("resources")
    if not isinstance(resources, dict):
        raise ConfigError("config must define a 'resources' mapping")
    _check_keys(resources, set(_RESOURCE_KEYS), "resources")
    base = path.parent
    paths: dict[str, Path] = {}
    for key in _RESOURCE_KEYS:
        if key not in resources:
            raise ConfigError(f"resources.{key} is required")
        resource = base / str(resources[key])
        if not resource.is_file():
            raise ConfigError(f"resources.{key}: no such file: {resource}")
        paths[key] = resource

    kg = raw.get("kg", {}) or {}
    _check_keys(kg, {"depth", "decay"}, "kg")
    kg_depth = int(kg.get("depth", 2))
    kg_decay = float(kg.get("decay", 0.5))
    if not 0 <= kg_depth <= MAX_DEPTH:
        raise ConfigError(f"kg.depth must be in [0, {MAX_DEPTH}]")
    if not 0.0 < kg_decay <= 1.0:
        raise ConfigError("kg.decay must be in (0, 1]")

    rk = raw.get("ranker", {}) or {}
    _check_keys(rk, {"grid", "epochs", "seed", "threshold_metric"}, "ranker")
    grid_raw = rk.get("grid")
    if grid_raw is None:
        grid = DEFAULT_GRID
    else:
        if not isinstance(grid_raw, list) or not grid_raw:
            raise ConfigError("ranker.grid must be a non-empty list")
        grid = tuple(float(c) for c in grid_raw)
        if any(c <= 0 for c in grid):
            raise ConfigError("ranker.grid values must be positive")
    epochs = int(rk.get("epochs", DEFAULT_EPOCHS))
    if epochs < 1:
        raise ConfigError("ranker.epochs must be >= 1")
    seed = int(rk.get("seed", DEFAULT_SEED))
    threshold_metric = str(rk.get("threshold_metric", "f1"))
    if threshold_metric not in ("f1", "accuracy"):
        raise ConfigError("ranker.threshold_metric must be 'f1' or 'accuracy'")

    ms = raw.get("measures", {}) or {}
    _check_keys(ms, {"enabled", "cosine_word_n", "ngram_overlap_n"}, "measures")
    enabled_raw = ms.get("enabled")
    if enabled_raw is None:
        enabled = frozenset(MEASURES)
    else:
        if not isinstance(enabled_raw, list) or not enabled_raw:
            raise ConfigError("measures.enabled must be a non-empty list")
        enabled = frozenset(str(m) for m in enabled_raw)
        unknown = enabled - set(MEASURES)
        if unknown:
            raise ConfigError(f"unknown measures: {sorted(unknown)}")
    cosine_word_n = int(ms.get("cosine_word_n", 1))
    if cosine_word_n not in (1, 2):
        raise ConfigError("measures.cosine_word_n must be 1 or 2")
    ngram_overlap_n = int(ms.get("ngram_overlap_n", 2))
    if ngram_overlap_n not in (1, 2, 3):
        raise ConfigError("measures.ngram_overlap_n must be 1, 2 or 3")

    cwasa_denominator = str(raw.get("cwasa_denominator", "invocab"))
    if cwasa_denominator not in ("invocab", "all"):
        raise ConfigError("cwasa_denominator must be 'invocab' or 'all'")
    centroid_unit_interval = bool(raw.get("centroid_unit_interval", False))

    return Config(
        **paths,
        kg_depth=kg_depth,
        kg_decay=kg_decay,
        grid=grid,
        epochs=epochs,
        seed=seed,
        threshold_metric=threshold_metric,
        enabled_measures=enabled,
        cosine_word_n=cosine_word_n,
        ngram_overlap_n=ngram_overlap_n,
        cwasa_denominator=cwasa_denominator,
        centroid_unit_interval=centroid_unit_interval,
    )
