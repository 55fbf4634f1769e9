"""Porter stemmer (the classic 1980 algorithm, steps 1a through 5b).

Suffix rules operate on the measure m of the candidate stem, where a word is
seen as [C](VC)^m[V] over consonant/vowel runs; y counts as a vowel exactly
when it follows a consonant.  Words shorter than three letters are returned
unchanged so stemming can never empty a token.
"""
from __future__ import annotations

_VOWELS = frozenset("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(word: str, end: int) -> int:
    """Number of vowel-to-consonant run transitions in word[:end]."""
    m = 0
    prev_vowel = False
    for i in range(end):
        if _is_consonant(word, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(word: str, end: int) -> bool:
    return any(not _is_consonant(word, i) for i in range(end))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # consonant-vowel-consonant where the final consonant is not w, x or y
    if len(word) < 3:
        return False
    return (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _step1a(w: str) -> str:
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-2]
    if w.endswith("ss"):
        return w
    if w.endswith("s"):
        return w[:-1]
    return w


def _step1b_cleanup(w: str) -> str:
    if w.endswith(("at", "bl", "iz")):
        return w + "e"
    if _ends_double_consonant(w) and w[-1] not in "lsz":
        return w[:-1]
    if _measure(w, len(w)) == 1 and _ends_cvc(w):
        return w + "e"
    return w


def _step1b(w: str) -> str:
    if w.endswith("eed"):
        if _measure(w, len(w) - 3) > 0:
            return w[:-1]
        return w
    if w.endswith("ed"):
        stem = w[:-2]
        if _contains_vowel(stem, len(stem)):
            return _step1b_cleanup(stem)
        return w
    if w.endswith("ing"):
        stem = w[:-3]
        if _contains_vowel(stem, len(stem)):
            return _step1b_cleanup(stem)
        return w
    return w


def _step1c(w: str) -> str:
    if w.endswith("y") and _contains_vowel(w, len(w) - 1):
        return w[:-1] + "i"
    return w


# (suffix, replacement) pairs; within a step the longest matching suffix is
# the only one tried, and a failed m-condition ends the step.
_STEP2 = sorted(
    [
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    ],
    key=lambda rule: -len(rule[0]),
)

_STEP3 = sorted(
    [
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    ],
    key=lambda rule: -len(rule[0]),
)

_STEP4 = sorted(
    [
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ],
    key=len,
    reverse=True,
)


def _apply_rules(w: str, rules, min_measure: int) -> str:
    for suffix, replacement in rules:
        if w.endswith(suffix):
            stem_len = len(w) - len(suffix)
            if _measure(w, stem_len) > min_measure - 1:
                return w[:stem_len] + replacement
            return w
    return w


def _step4(w: str) -> str:
    for suffix in _STEP4:
        if w.endswith(suffix):
            stem_len = len(w) - len(suffix)
            if _measure(w, stem_len) > 1:
                if suffix == "ion" and w[stem_len - 1] not in "st":
                    return w
                return w[:stem_len]
            return w
    return w


def _step5a(w: str) -> str:
    if w.endswith("e"):
        m = _measure(w, len(w) - 1)
        if m > 1:
            return w[:-1]
        if m == 1 and not _ends_cvc(w[:-1]):
            return w[:-1]
    return w


def _step5b(w: str) -> str:
    if (
        w.endswith("l")
        and _ends_double_consonant(w)
        and _measure(w, len(w)) > 1
    ):
        return w[:-1]
    return w


def porter_stem(token: str) -> str:
    """Stem one lowercase token."""
    if len(token) <= 2:
        return token
    w = _step1a(token)
    w = _step1b(w)
    w = _step1c(w)
    w = _apply_rules(w, _STEP2, 1)
    w = _apply_rules(w, _STEP3, 1)
    w = _step4(w)
    w = _step5a(w)
    w = _step5b(w)
    return w
