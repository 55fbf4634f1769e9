"""Frame evocation from a lemma lexicon and the shared-frame similarity.

For every frame evoked on both sides, the evoking lemma sets are compared;
the score is the ratio of summed intersections to summed unions over the
shared frames.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .preprocess import TextView


@dataclass
class FrameLexicon:
    evokes: dict[str, frozenset[str]] = field(default_factory=dict)


def load_frame_lexicon(path: str | Path) -> FrameLexicon:
    """Read `lemma<TAB>frame` rows; duplicates collapse."""
    raw: dict[str, set[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise DataError(f"line {lineno}: expected 2 columns")
            lemma, frame = parts[0].strip(), parts[1].strip()
            if not lemma or not frame:
                raise DataError(f"line {lineno}: blank lemma or frame")
            raw.setdefault(lemma.lower(), set()).add(frame)
    return FrameLexicon(evokes={l: frozenset(f) for l, f in raw.items()})


def extract_frames(view: TextView, lex: FrameLexicon) -> dict[str, set[str]]:
    """Map each evoked frame to the view lemmas that evoke it."""
    frames: dict[str, set[str]] = {}
    for lemma in view.lemmas:
        for frame in lex.evokes.get(lemma, ()):
            frames.setdefault(frame, set()).add(lemma)
    return frames


def frame_overlap_similarity(a: TextView, b: TextView, lex: FrameLexicon) -> float:
    """Jaccard of evoking lemmas, summed over the frames both views evoke."""
    frames_a = extract_frames(a, lex)
    frames_b = extract_frames(b, lex)
    shared = frames_a.keys() & frames_b.keys()
    if not shared:
        return 0.0
    inter = 0
    union = 0
    for frame in shared:
        inter += len(frames_a[frame] & frames_b[frame])
        union += len(frames_a[frame] | frames_b[frame])
    if union == 0:
        return 0.0
    return inter / union
