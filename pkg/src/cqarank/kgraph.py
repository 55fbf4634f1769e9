"""File-backed semantic network and activation-graph text relatedness.

Each lemma of a text seeds its candidate concepts with uniform 1/k weight;
bounded-depth expansion then spreads activation along weighted directed
edges, multiplying edge weights and an exponential depth decay.  Texts are
compared by the cosine of their concept-activation vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .preprocess import TextView

MAX_DEPTH = 3


@dataclass
class SemanticNetwork:
    concepts: set[str] = field(default_factory=set)
    edges: dict[str, list[tuple[str, str, float]]] = field(default_factory=dict)
    senses: dict[str, list[str]] = field(default_factory=dict)


@dataclass
class KnowledgeGraph:
    weights: dict[str, float]
    source_text_id: str = ""


def load_network(edges_path: str | Path, senses_path: str | Path) -> SemanticNetwork:
    """Read `src<TAB>relation<TAB>dst<TAB>weight` edges and
    `lemma<TAB>concept_id` senses; concepts are declared by appearance."""
    net = SemanticNetwork()
    with open(edges_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 4:
                raise DataError(f"line {lineno}: expected 4 columns")
            src, relation, dst, raw_weight = parts
            if not src or not dst:
                raise DataError(f"line {lineno}: empty concept id")
            try:
                weight = float(raw_weight)
            except ValueError:
                raise DataError(f"line {lineno}: non-numeric weight") from None
            if not (0.0 < weight <= 1.0):
                raise DataError(f"line {lineno}: weight must be in (0,1]")
            net.concepts.add(src)
            net.concepts.add(dst)
            net.edges.setdefault(src, []).append((dst, relation, weight))
    with open(senses_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise DataError(f"line {lineno}: expected 2 columns")
            lemma, concept = parts
            if not lemma or not concept:
                raise DataError(f"line {lineno}: empty lemma or concept id")
            net.concepts.add(concept)
            net.senses.setdefault(lemma.lower(), []).append(concept)
    return net


def build_graph(
    view: TextView,
    net: SemanticNetwork,
    depth: int = 2,
    decay: float = 0.5,
    text_id: str = "",
) -> KnowledgeGraph:
    """Expand the view's lemma senses into a concept-activation graph.

    Activation reaching a concept over a j-edge path is
    seed * decay**j * product(edge weights); paths are enumerated without
    visited-set pruning, so cycles contribute at every allowed depth.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth > MAX_DEPTH:
        raise ValueError(f"depth capped at {MAX_DEPTH} to bound path enumeration")
    if not (0.0 < decay <= 1.0):
        raise ValueError("decay must be in (0,1]")

    frontier: dict[str, float] = {}
    for lemma in view.lemmas:
        candidates = net.senses.get(lemma)
        if not candidates:
            continue
        seed = 1.0 / len(candidates)
        for concept in candidates:
            frontier[concept] = frontier.get(concept, 0.0) + seed

    activations: dict[str, float] = {}
    for level in range(depth + 1):
        for concept, mass in frontier.items():
            activations[concept] = activations.get(concept, 0.0) + mass
        if level == depth:
            break
        next_frontier: dict[str, float] = {}
        for concept, mass in frontier.items():
            for dst, _relation, weight in net.edges.get(concept, ()):
                next_frontier[dst] = next_frontier.get(dst, 0.0) + mass * decay * weight
        frontier = next_frontier

    return KnowledgeGraph(
        weights={c: a for c, a in activations.items() if a > 0.0},
        source_text_id=text_id,
    )


def kga_similarity(g1: KnowledgeGraph, g2: KnowledgeGraph) -> float:
    """Cosine of the two activation vectors over the concept union."""
    if not g1.weights or not g2.weights:
        return 0.0
    dot = sum(a * g2.weights.get(c, 0.0) for c, a in g1.weights.items())
    norm1 = math.sqrt(sum(a * a for a in g1.weights.values()))
    norm2 = math.sqrt(sum(a * a for a in g2.weights.values()))
    if norm1 == 0.0 or norm2 == 0.0:
        return 0.0
    return min(1.0, dot / (norm1 * norm2))
