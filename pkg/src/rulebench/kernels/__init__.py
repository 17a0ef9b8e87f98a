"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

Set RULEBENCH_PURE=1 to force the fallback (used by the benchmark and the
backend-parity tests).
"""

import os

from . import _pure

if os.environ.get("RULEBENCH_PURE"):
    _impl = _pure
else:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
intersect_sorted = _impl.intersect_sorted
union_sorted = _impl.union_sorted
difference_sorted = _impl.difference_sorted
phrase_step = _impl.phrase_step
doc_distinct_counts = _impl.doc_distinct_counts

__all__ = [
    "BACKEND",
    "intersect_sorted",
    "union_sorted",
    "difference_sorted",
    "phrase_step",
    "doc_distinct_counts",
]
