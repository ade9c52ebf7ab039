"""Batch word filters with a numba fast path and a pure-numpy fallback.

The active backend is picked at import time: set ``SHIFTSPACE_PURE_NUMPY=1``
to force the numpy implementations, otherwise numba is used when available.
``BACKEND`` records the choice ("numba" or "numpy").
"""

import os
import warnings

from . import _numpy

if os.environ.get("SHIFTSPACE_PURE_NUMPY", "").strip() not in ("", "0"):
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - depends on environment
        warnings.warn("numba unavailable, falling back to pure numpy kernels")
        _impl = _numpy
        BACKEND = "numpy"

decode_digits = _numpy.decode_digits
dfa_filter = _impl.dfa_filter
subset_filter = _impl.subset_filter
marker_filter = _impl.marker_filter
selector_filter = _impl.selector_filter

__all__ = [
    "BACKEND",
    "decode_digits",
    "dfa_filter",
    "subset_filter",
    "marker_filter",
    "selector_filter",
]
