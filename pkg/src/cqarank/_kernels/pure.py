"""Pure numpy fallback for the hot kernels.

Semantics match the compiled extension; only float reduction order may
differ, so cross-backend results agree to ~1e-12 rather than bitwise.
"""
from __future__ import annotations

import numpy as np

BACKEND = "pure"


def cwasa_match_total(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of best-match cosines in both directions, negatives clipped to 0.

    ``a`` (n, d) and ``b`` (m, d) hold unit-norm row vectors, n, m >= 1.
    """
    sims = a @ b.T
    np.maximum(sims, 0.0, out=sims)
    return float(sims.max(axis=1).sum() + sims.max(axis=0).sum())


def rank_hinge_epoch(
    w: np.ndarray,
    diffs: np.ndarray,
    order: np.ndarray,
    cost: float,
    t0: int,
) -> int:
    """One epoch of pairwise hinge subgradient steps, updating ``w`` in place.

    ``diffs`` holds one row per preference pair (winner minus loser);
    ``order`` is this epoch's visiting permutation.  The step size at global
    step t is (1 / (1 + t/P)) / P with P the number of pairs.  Returns the
    advanced step counter.
    """
    n_pairs = diffs.shape[0]
    inv_pairs = 1.0 / n_pairs
    t = t0
    for idx in order:
        d = diffs[idx]
        margin = float(np.dot(w, d))
        eta = inv_pairs / (1.0 + t * inv_pairs)
        w *= 1.0 - eta * inv_pairs
        if margin < 1.0:
            w += (eta * cost) * d
        t += 1
    return t
