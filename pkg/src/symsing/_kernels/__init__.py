"""Kernel backend selection.

The compiled extension is preferred when it imports; setting
``SYMSING_PURE_PYTHON=1`` in the environment forces the numpy fallback
(used by the benchmark and for debugging).  Both backends expose the
same seven functions with identical semantics, pinned against each
other in ``tests/test_kernels.py``.
"""

from __future__ import annotations

import os
import warnings

from . import _pure

if os.environ.get("SYMSING_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        warnings.warn(
            "compiled kernels unavailable; falling back to the slower numpy implementation",
            RuntimeWarning,
            stacklevel=2,
        )
        _impl = _pure

BACKEND: str = _impl.BACKEND

enum_scan = _impl.enum_scan
matvec_match_count = _impl.matvec_match_count
mc_nullity_hist = _impl.mc_nullity_hist
rank_mod = _impl.rank_mod
det_bareiss = _impl.det_bareiss
fourier_sum = _impl.fourier_sum
error_sums = _impl.error_sums

__all__ = [
    "BACKEND",
    "enum_scan",
    "matvec_match_count",
    "mc_nullity_hist",
    "rank_mod",
    "det_bareiss",
    "fourier_sum",
    "error_sums",
]
