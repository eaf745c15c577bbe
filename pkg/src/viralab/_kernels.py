"""Kernel dispatch: numba-jitted hot loops with a NumPy fallback.

The jitted path is the default whenever numba imports cleanly.  Setting the
environment variable ``VIRALAB_NUMBA`` to ``0``/``false``/``off`` before the
package is imported forces the pure-NumPy path; anything else (or unset)
selects numba when available.  ``BACKEND`` records which path is live.

Both paths implement identical arithmetic; the benchmark in
``benchmarks/bench_kernels.py`` times them side by side.
"""

import os

from . import _kernels_np

_FLAG = os.environ.get("VIRALAB_NUMBA", "").strip().lower()
_DISABLED = _FLAG in {"0", "false", "off", "no"}

if not _DISABLED:
    try:
        from . import _kernels_nb as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _kernels_np
        BACKEND = "numpy"
else:
    _impl = _kernels_np
    BACKEND = "numpy"

influence_scores = _impl.influence_scores
log_ratio_scores = _impl.log_ratio_scores
follower_ratio_scores = _impl.follower_ratio_scores
percentile_ranks = _impl.percentile_ranks
logreg_fit = _impl.logreg_fit


def available_backends():
    """Map backend name -> kernel module, for benchmarks and tests."""
    out = {"numpy": _kernels_np}
    try:
        from . import _kernels_nb

        out["numba"] = _kernels_nb
    except ImportError:
        pass
    return out
