"""Hot kernels: compiled extension when available, pure Python otherwise.

The backend is chosen once at import.  Set ``UNIVJAC_PURE_PYTHON=1`` to force
the fallback (useful for benchmarking and for checking the two agree).
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("UNIVJAC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

INF = _pykernels.INF
connected_mask = _impl.connected_mask
biconnected_masks = _impl.biconnected_masks
mask_edge_stats = _impl.mask_edge_stats
propagate = _impl.propagate

__all__ = [
    "BACKEND",
    "INF",
    "biconnected_masks",
    "connected_mask",
    "mask_edge_stats",
    "propagate",
]
