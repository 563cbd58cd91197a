"""Pick the compiled kernels when importable, else the pure-Python ones.

Set ``COOLBOUND_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("COOLBOUND_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py

COMPILED = kernels is not _kernels_py
