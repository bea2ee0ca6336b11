"""Kernel backend selection.

The env flag MIXCOMM_BACKEND chooses the hot-kernel implementation:

  - "numba" (or unset with numba installed): JIT-compiled kernels
  - "numpy": pure-numpy fallback, no compilation

The flag is read once at import.  Integer stream derivation is identical
across backends; float outputs agree to rounding, so byte-level
reproducibility of results holds within one backend.
"""

from __future__ import annotations

import os

_requested = os.environ.get("MIXCOMM_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"MIXCOMM_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"

CH_GAUSSIAN = _impl.CH_GAUSSIAN
CH_SQRT = _impl.CH_SQRT
SENSOR_IDENTITY = _impl.SENSOR_IDENTITY
SENSOR_LINEAR = _impl.SENSOR_LINEAR
SENSOR_MOS = _impl.SENSOR_MOS

simulate_chain = _impl.simulate_chain
symbol_picks = _impl.symbol_picks
gauss_argmax = _impl.gauss_argmax
pep_overlap = _impl.pep_overlap
