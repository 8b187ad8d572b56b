"""Kernel backend selection: compiled extension if importable, numpy otherwise.

Set ``CYLHARM_PURE_PY=1`` to force the numpy fallback (used by the benchmark
to compare the two).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CYLHARM_PURE_PY", "").strip() in ("1", "true", "yes"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
panel_fast = _impl.panel_fast
panel_gl = _impl.panel_gl


def available_backends():
    out = {"numpy": _kernels_py}
    try:
        from . import _kernels
        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
