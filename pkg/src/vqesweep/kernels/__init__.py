"""State-vector kernels: compiled extension when available, numpy otherwise.

Set VQESWEEP_KERNELS=numpy (or =cython) to force a backend; the default is
the compiled one with a silent fallback to numpy.
"""

import os

from . import py_backend

_forced = os.environ.get("VQESWEEP_KERNELS", "").lower()

if _forced == "numpy":
    _impl = py_backend
    BACKEND = "numpy"
else:
    try:
        from . import _fast as _impl

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        _impl = py_backend
        BACKEND = "numpy"

apply_sum = _impl.apply_sum
expect_sum = _impl.expect_sum
