#!/usr/bin/env python3
"""Generate the bundled toy dataset under data/toy/.

Six topical clusters drive every resource: thread texts share vocabulary
within a topic, word vectors cluster by topic, the semantic network links
topic words through per-topic hub concepts, and frames group topic verbs.
Relevance labels follow the topical structure, so the similarity features
carry real signal for the ranker.  Everything is derived from one seed.
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

SEED = 20160616

TOPICS = {
    "files": {
        "nouns": ["pdf", "file", "document", "reader", "viewer", "page", "printer", "scanner"],
        "verbs": ["open", "print", "convert", "crash", "install", "download"],
    },
    "cooking": {
        "nouns": ["pizza", "oven", "dough", "cheese", "recipe", "kitchen", "restaurant", "dinner"],
        "verbs": ["bake", "cook", "eat", "heat", "order", "taste"],
    },
    "travel": {
        "nouns": ["visa", "passport", "embassy", "flight", "ticket", "airport", "hotel", "luggage"],
        "verbs": ["travel", "apply", "renew", "book", "depart", "pack"],
    },
    "cars": {
        "nouns": ["car", "engine", "garage", "tyre", "brake", "battery", "mechanic", "oil"],
        "verbs": ["drive", "repair", "start", "replace", "service", "park"],
    },
    "phones": {
        "nouns": ["phone", "screen", "battery", "sim", "camera", "charger", "network", "signal"],
        "verbs": ["call", "charge", "unlock", "restart", "upgrade", "connect"],
    },
    "sports": {
        "nouns": ["gym", "coach", "team", "match", "ball", "court", "trainer", "tournament"],
        "verbs": ["play", "train", "win", "practice", "join", "score"],
    },
}

STOPWORDS = [
    "the", "a", "an", "is", "are", "i", "you", "my", "to", "in", "on", "of",
    "for", "and", "or", "how", "what", "where", "can", "do", "does", "it",
    "this", "that", "with", "me", "can't", "don't", "doesn't", "i'm", "it's",
]

# filler appears in texts but carries no topical signal; the last few get no
# word vectors on purpose so the out-of-vocabulary path is exercised
FILLER = ["please", "help", "anyone", "really", "maybe", "someone", "thanks", "hello"]
OOV_FILLER = {"thanks", "hello"}

LEMMA_TABLE = {
    "files": "file", "documents": "document", "pages": "page",
    "crashes": "crash", "opened": "open", "opens": "open",
    "printing": "print", "readers": "reader", "pizzas": "pizza",
    "recipes": "recipe", "ovens": "oven", "baked": "bake", "cooking": "cook",
    "tickets": "ticket", "flights": "flight", "applied": "apply",
    "renewed": "renew", "booked": "book", "cars": "car", "engines": "engine",
    "tyres": "tyre", "brakes": "brake", "repaired": "repair",
    "phones": "phone", "screens": "screen", "calls": "call",
    "charged": "charge", "played": "play", "playing": "play",
    "matches": "match", "teams": "team", "wins": "win", "scored": "score",
}

INFLECTIONS = {lemma: [] for lemma in set(LEMMA_TABLE.values())}
for surface, lemma in LEMMA_TABLE.items():
    INFLECTIONS[lemma].append(surface)


def topic_words(topic: str) -> list[str]:
    return TOPICS[topic]["nouns"] + TOPICS[topic]["verbs"]


def surface_form(rng, word: str) -> str:
    forms = INFLECTIONS.get(word)
    if forms and rng.random() < 0.3:
        return forms[int(rng.integers(len(forms)))]
    return word


def make_text(rng, words: list[str], n_content: int, question: bool) -> str:
    chosen = [surface_form(rng, words[int(rng.integers(len(words)))]) for _ in range(n_content)]
    out = []
    for word in chosen:
        if rng.random() < 0.45:
            out.append(STOPWORDS[int(rng.integers(len(STOPWORDS)))])
        out.append(word)
        if rng.random() < 0.18:
            out.append(FILLER[int(rng.integers(len(FILLER)))])
    text = " ".join(out)
    text = text[0].upper() + text[1:]
    return text + ("?" if question else ".")


def sample_comment(rng, relq_words, own_topic, label):
    if label == "Good":
        pool = relq_words + TOPICS[own_topic]["verbs"]
        return make_text(rng, pool, int(rng.integers(4, 8)), question=False)
    if label == "PotentiallyUseful":
        pool = relq_words[:2] + FILLER
        return make_text(rng, pool, int(rng.integers(2, 4)), question=False)
    other = [t for t in TOPICS if t != own_topic]
    topic = other[int(rng.integers(len(other)))]
    return make_text(rng, topic_words(topic), int(rng.integers(3, 7)), question=False)


def comment_orgq_label(rng, relq_same_topic: bool, relq_label: str) -> str:
    if relq_same_topic:
        if relq_label == "Good":
            return "Good" if rng.random() < 0.8 else "PotentiallyUseful"
        if relq_label == "PotentiallyUseful":
            return "PotentiallyUseful" if rng.random() < 0.5 else "Bad"
    return "Bad"


def make_thread(rng, index: int) -> dict:
    topics = list(TOPICS)
    topic = topics[int(rng.integers(len(topics)))]
    org_pool = topic_words(topic)
    org_sample = [org_pool[int(rng.integers(len(org_pool)))] for _ in range(8)]
    thread = {
        "id": f"Q{index}",
        "subject": make_text(rng, org_sample, int(rng.integers(3, 5)), question=True),
        "body": make_text(rng, org_sample, int(rng.integers(5, 9)), question=True),
        "related": [],
    }
    n_related = int(rng.integers(3, 6))
    drafts = []
    for r in range(n_related):
        same_topic = rng.random() < 0.55
        if same_topic:
            if rng.random() < 0.4:
                rel_label = "PerfectMatch"
                rel_pool = org_sample  # echo the original question's wording
            else:
                rel_label = "Relevant"
                rel_pool = org_pool
            rel_topic = topic
        else:
            rel_label = "Irrelevant"
            others = [t for t in topics if t != topic]
            rel_topic = others[int(rng.integers(len(others)))]
            rel_pool = topic_words(rel_topic)
        rel_words = [rel_pool[int(rng.integers(len(rel_pool)))] for _ in range(7)]
        relq = {
            "id": f"Q{index}_R{r + 1}",
            "subject": make_text(rng, rel_words, int(rng.integers(3, 5)), question=True),
            "body": make_text(rng, rel_words, int(rng.integers(4, 8)), question=True),
            "relevance_to_orgq": rel_label,
            "comments": [],
        }
        for c in range(int(rng.integers(2, 5))):
            roll = rng.random()
            label = "Good" if roll < 0.45 else ("PotentiallyUseful" if roll < 0.65 else "Bad")
            relq["comments"].append(
                {
                    "id": f"{relq['id']}_C{c + 1}",
                    "text": sample_comment(rng, rel_words, rel_topic, label),
                    "relevance_to_relq": label,
                    "relevance_to_orgq": comment_orgq_label(
                        rng, rel_topic == topic, label
                    ),
                }
            )
        grade = {"PerfectMatch": 2, "Relevant": 1, "Irrelevant": 0}[rel_label]
        drafts.append((grade, relq))

    # a search engine would rank relevant questions higher, with noise
    keyed = [(grade * 2 + rng.normal(), relq) for grade, relq in drafts]
    keyed.sort(key=lambda kv: -kv[0])
    with_ranks = rng.random() > 0.1
    for rank, (_, relq) in enumerate(keyed, start=1):
        if with_ranks:
            relq["search_rank"] = rank
    thread["related"] = [relq for _, relq in drafts]
    return thread


def write_corpus(rng, path: Path, n_threads: int, start: int) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(n_threads):
            fh.write(json.dumps(make_thread(rng, start + i)) + "\n")


def write_vectors(rng, path: Path) -> None:
    words = sorted(
        {w for t in TOPICS for w in topic_words(t)}
        | {f for f in FILLER if f not in OOV_FILLER}
    )
    dim = 12
    axes = {t: i for i, t in enumerate(TOPICS)}
    rows = []
    for word in words:
        vec = 0.25 * rng.normal(size=dim)
        for t in TOPICS:
            if word in topic_words(t):
                vec[2 * axes[t]] += 1.0
                vec[2 * axes[t] + 1] += 0.5
        norm = np.linalg.norm(vec)
        rows.append((word, vec / norm))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for word, vec in rows:
            fh.write(word + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")


def write_network(rng, edges_path: Path, senses_path: Path) -> None:
    edge_lines = []
    sense_lines = []
    hubs = {t: f"hub_{t}" for t in TOPICS}
    for t in TOPICS:
        for word in topic_words(t):
            concept = f"c_{word}@{t}"
            sense_lines.append(f"{word}\t{concept}")
            edge_lines.append(f"{concept}\tin_topic\t{hubs[t]}\t0.9")
        for word in TOPICS[t]["nouns"][:3]:
            edge_lines.append(f"{hubs[t]}\thas_member\tc_{word}@{t}\t0.7")
    topics = list(TOPICS)
    for a, b in zip(topics, topics[1:]):
        edge_lines.append(f"{hubs[a]}\tnear\t{hubs[b]}\t0.2")
    edges_path.write_text("\n".join(edge_lines) + "\n", encoding="utf-8")
    senses_path.write_text("\n".join(sense_lines) + "\n", encoding="utf-8")


def write_frames(path: Path) -> None:
    lines = []
    for t in TOPICS:
        for verb in TOPICS[t]["verbs"]:
            lines.append(f"{verb}\tActivity_{t}")
        for noun in TOPICS[t]["nouns"][:4]:
            lines.append(f"{noun}\tDomain_{t}")
    lines.append("help\tAssistance")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


CONFIG = """\
resources:
  stopwords: stopwords.txt
  lemma_table: lemmas.tsv
  noun_lexicon: nouns.txt
  embeddings: vectors.txt
  kg_edges: kg_edges.tsv
  kg_senses: kg_senses.tsv
  frame_lexicon: frames.tsv
kg:
  depth: 2
  decay: 0.5
ranker:
  epochs: 200
  seed: 13
  threshold_metric: f1
cwasa_denominator: invocab
centroid_unit_interval: false
"""


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", default=Path(__file__).parent.parent / "data" / "toy", type=Path
    )
    args = parser.parse_args()
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(SEED)
    write_corpus(rng, out / "corpus_train.jsonl", n_threads=20, start=1)
    write_corpus(rng, out / "corpus_dev.jsonl", n_threads=8, start=101)
    write_vectors(rng, out / "vectors.txt")
    write_network(rng, out / "kg_edges.tsv", out / "kg_senses.tsv")
    write_frames(out / "frames.tsv")

    (out / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")
    (out / "lemmas.tsv").write_text(
        "\n".join(f"{s}\t{l}" for s, l in sorted(LEMMA_TABLE.items())) + "\n",
        encoding="utf-8",
    )
    nouns = sorted({n for t in TOPICS for n in TOPICS[t]["nouns"]})
    (out / "nouns.txt").write_text("\n".join(nouns) + "\n", encoding="utf-8")
    (out / "config.yaml").write_text(CONFIG, encoding="utf-8")
    print(f"wrote toy dataset to {out}")


if __name__ == "__main__":
    main()
