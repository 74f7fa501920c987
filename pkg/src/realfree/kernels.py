"""Kernel selection: the compiled extension when it is importable, else pure Python.

Set ``REALFREE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("REALFREE_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
MODE_ALL = _kernels_py.MODE_ALL
MODE_CONNECTED = _kernels_py.MODE_CONNECTED
MODE_CENTRED = _kernels_py.MODE_CENTRED

row_cycle_counts = _impl.row_cycle_counts
accumulate = _impl.accumulate
