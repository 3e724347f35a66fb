"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set MBRANK_FORCE_PY=1 to force the fallback (the benchmark uses this).
"""

from __future__ import annotations

import os

from . import kernels_py

if os.environ.get("MBRANK_FORCE_PY"):
    _impl = kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = kernels_py
        BACKEND = "python"


def count_low_rank(slices, p: int, r: int) -> int:
    return _impl.count_low_rank(slices, p, r)
