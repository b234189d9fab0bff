"""Numeric kernels with a compiled core and a pure-Python fallback.

The compiled extension (Cython) carries the two loops that dominate the
test-suite runtime: fractional ranking and the exact rank-sum subset-sum
distribution. Import falls back to the numpy implementation when the
extension was not built; set ``PREREQMINE_PURE=1`` to force the fallback
(the benchmark and the backend-equivalence tests use this).
"""

import os

if os.environ.get("PREREQMINE_PURE"):
    from prereqmine._kernels import _fallback as _impl
else:
    try:
        from prereqmine._kernels import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        from prereqmine._kernels import _fallback as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND
average_ranks = _impl.average_ranks
ranksum_count_distribution = _impl.ranksum_count_distribution

__all__ = ["BACKEND", "average_ranks", "ranksum_count_distribution"]
