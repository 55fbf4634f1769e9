"""Hot-loop kernels with backend selection at import.

The compiled extension is preferred; the numpy fallback is used when the
extension is unavailable or when CQARANK_PURE is set in the environment.
"""
from __future__ import annotations

import os

if os.environ.get("CQARANK_PURE"):
    from . import pure as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _impl

BACKEND: str = _impl.BACKEND
cwasa_match_total = _impl.cwasa_match_total
rank_hinge_epoch = _impl.rank_hinge_epoch

__all__ = ["BACKEND", "cwasa_match_total", "rank_hinge_epoch"]
