"""Hot-loop kernels: the compiled extension when built, NumPy otherwise.

Set ``GRONWALL_PURE=1`` to force the NumPy implementation.
"""

import os

from . import _fallback

if os.environ.get("GRONWALL_PURE"):
    _impl = _fallback
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "numpy"

sigma_segment = _impl.sigma_segment
robin_filter = _impl.robin_filter
sa_records = _impl.sa_records

__all__ = ["BACKEND", "sigma_segment", "robin_filter", "sa_records"]
