"""Kernel selection.

The compiled extension is used when it imports; setting the environment
variable ``HALFINT4_PURE_PYTHON=1`` forces the fallback. Both paths return
identical integers.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("HALFINT4_PURE_PYTHON") == "1":
        raise ImportError("pure-python backend requested")
    from . import _kernels as _ext
except ImportError:
    _ext = None

BACKEND = "cython" if _ext is not None else "python"


def convolve(a: list[int], b: list[int], n: int) -> list[int]:
    if _ext is not None:
        out = _ext.convolve(a, b, n)
        if out is not None:
            return out
    return _kernels_py.convolve(a, b, n)


def sigma1_table(n: int) -> list[int]:
    if _ext is not None:
        return _ext.sigma1_table(n)
    return _kernels_py.sigma1_table(n)
