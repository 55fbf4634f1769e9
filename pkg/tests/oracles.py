"""Independent brute-force oracles the tests compare the package against.

Everything here is deliberately written with a different structure from the
library code: explicit prefix loops, pair enumeration, exhaustive threshold
sweeps, and a pattern-string Porter stemmer.
"""
from __future__ import annotations

import math
import re

TOP_K = 10


# ---------------------------------------------------------------------------
# ranking measures


def ap_oracle(flags, k=TOP_K):
    relevant = sum(1 for f in flags if f)
    total = 0.0
    for i in range(1, min(k, len(flags)) + 1):
        if flags[i - 1]:
            total += sum(1 for f in flags[:i] if f) / i
    return total / min(relevant, k)


def avgrec_oracle(flags, k=TOP_K):
    relevant = sum(1 for f in flags if f)
    acc = 0.0
    for i in range(1, k + 1):
        acc += sum(1 for f in flags[:i] if f) / relevant
    return acc / k


def rr_oracle(flags, k=TOP_K):
    for i in range(1, min(k, len(flags)) + 1):
        if flags[i - 1]:
            return 1.0 / i
    return 0.0


def rank_by_score(items):
    """items: (candidate_id, score, gold) -> gold flags in evaluation order."""
    ordered = sorted(items, key=lambda it: (-it[1], it[0]))
    return [bool(g) for _, _, g in ordered]


def classification_oracle(pairs):
    tp = fp = fn = tn = 0
    for predicted, gold in pairs:
        if predicted and gold:
            tp += 1
        elif predicted and not gold:
            fp += 1
        elif not predicted and gold:
            fn += 1
        else:
            tn += 1
    n = tp + fp + fn + tn
    acc = (tp + tn) / n
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return acc, p, r, f1


# ---------------------------------------------------------------------------
# similarity


def cosine_oracle(u: dict, v: dict) -> float:
    keys = set(u) | set(v)
    dot = sum(u.get(k, 0.0) * v.get(k, 0.0) for k in keys)
    norm_u = math.sqrt(sum(u.get(k, 0.0) ** 2 for k in keys))
    norm_v = math.sqrt(sum(v.get(k, 0.0) ** 2 for k in keys))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return dot / (norm_u * norm_v)


def counts(seq) -> dict:
    table: dict = {}
    for item in seq:
        table[item] = table.get(item, 0) + 1
    return table


def cwasa_oracle(vecs_a, vecs_b) -> float:
    """Exhaustive pair enumeration over plain Python lists of unit vectors."""

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    best_a = [max(0.0, max(dot(u, v) for v in vecs_b)) for u in vecs_a]
    best_b = [max(0.0, max(dot(u, v) for u in vecs_a)) for v in vecs_b]
    return (sum(best_a) + sum(best_b)) / (len(vecs_a) + len(vecs_b))


# ---------------------------------------------------------------------------
# threshold calibration


def f1_at(scores, gold, theta) -> float:
    pairs = [(s >= theta, g) for s, g in zip(scores, gold)]
    return classification_oracle(pairs)[3]


def best_f1_exhaustive(scores, gold) -> float:
    """Max F1 over midpoints, exact score positions and both extremes."""
    distinct = sorted(set(scores))
    thetas = [distinct[0] - 1.0, distinct[-1] + 1.0]
    thetas.extend(distinct)
    for a, b in zip(distinct, distinct[1:]):
        thetas.append((a + b) / 2.0)
    return max(f1_at(scores, gold, theta) for theta in thetas)


# ---------------------------------------------------------------------------
# Porter stemmer (pattern-string formulation)

_STEP2_RULES = {
    "ational": "ate", "tional": "tion", "enci": "ence", "anci": "ance",
    "izer": "ize", "abli": "able", "alli": "al", "entli": "ent", "eli": "e",
    "ousli": "ous", "ization": "ize", "ation": "ate", "ator": "ate",
    "alism": "al", "iveness": "ive", "fulness": "ful", "ousness": "ous",
    "aliti": "al", "iviti": "ive", "biliti": "ble",
}

_STEP3_RULES = {
    "icate": "ic", "ative": "", "alize": "al", "iciti": "ic", "ical": "ic",
    "ful": "", "ness": "",
}

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
    "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def _cv_form(word: str) -> str:
    form = []
    for i, ch in enumerate(word):
        if ch in "aeiou":
            form.append("v")
        elif ch == "y":
            form.append("c" if i == 0 or form[i - 1] == "v" else "v")
        else:
            form.append("c")
    return "".join(form)


def _m(word: str) -> int:
    return len(re.findall(r"v+c", _cv_form(word)))


def _has_vowel(word: str) -> bool:
    return "v" in _cv_form(word)

def _double_consonant(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _cv_form(word)[-1] == "c"


def _cvc(word: str) -> bool:
    return (
        len(word) >= 3
        and _cv_form(word).endswith("cvc")
        and word[-1] not in "wxy"
    )


def _longest_rule(word: str, rules: dict):
    matches = [s for s in rules if word.endswith(s)]
    if not matches:
        return None
    return max(matches, key=len)


def porter_oracle(word: str) -> str:
    if len(word) <= 2:
        return word
    w = word

    # step 1a
    for suffix, repl in (("sses", "ss"), ("ies", "i"), ("ss", "ss"), ("s", "")):
        if w.endswith(suffix):
            w = w[: len(w) - len(suffix)] + repl
            break

    # step 1b
    if w.endswith("eed"):
        if _m(w[:-3]) > 0:
            w = w[:-1]
    else:
        stripped = None
        if w.endswith("ed") and _has_vowel(w[:-2]):
            stripped = w[:-2]
        elif w.endswith("ing") and _has_vowel(w[:-3]):
            stripped = w[:-3]
        if stripped is not None:
            if stripped.endswith("at") or stripped.endswith("bl") or stripped.endswith("iz"):
                w = stripped + "e"
            elif _double_consonant(stripped) and stripped[-1] not in "lsz":
                w = stripped[:-1]
            elif _m(stripped) == 1 and _cvc(stripped):
                w = stripped + "e"
            else:
                w = stripped

    # step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    # steps 2 and 3
    for rules in (_STEP2_RULES, _STEP3_RULES):
        suffix = _longest_rule(w, rules)
        if suffix is not None and _m(w[: len(w) - len(suffix)]) > 0:
            w = w[: len(w) - len(suffix)] + rules[suffix]

    # step 4
    matches = [s for s in _STEP4_SUFFIXES if w.endswith(s)]
    if matches:
        suffix = max(matches, key=len)
        stem = w[: len(w) - len(suffix)]
        if _m(stem) > 1 and (suffix != "ion" or stem.endswith(("s", "t"))):
            w = stem

    # step 5a
    if w.endswith("e"):
        m = _m(w[:-1])
        if m > 1 or (m == 1 and not _cvc(w[:-1])):
            w = w[:-1]

    # step 5b
    if w.endswith("ll") and _m(w) > 1:
        w = w[:-1]

    return w
