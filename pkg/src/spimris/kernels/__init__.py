"""Hot-kernel dispatch: numba by default, pure numpy behind an env flag.

Set SPIMRIS_DISABLE_NUMBA=1 (before import) to force the numpy path; the
flag also acts as the fallback when numba is unavailable.
"""

from __future__ import annotations

import os

from . import _numpy

_FLAG = os.environ.get("SPIMRIS_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG in {"1", "true", "yes", "on"}

if _DISABLED:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # numba missing or incompatible
        _impl = _numpy
        BACKEND = "numpy"

ris_sweep = _impl.ris_sweep
mu_greedy_sweep = _impl.mu_greedy_sweep


def backend() -> str:
    """Active kernel backend, 'numba' or 'numpy'."""
    return BACKEND
