"""Select the compiled kernels when available, else the pure-Python fallback.

Set ``TREESPILE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("TREESPILE_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
