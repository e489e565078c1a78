"""Kernel backend selection.

The compiled extension is preferred when present; the numpy implementation is
the fallback so a pure-Python install stays functional.  Override with the
environment variable FRACEIG_KERNELS=cython|numpy (checked at import time).
"""

from __future__ import annotations

import os

_requested = os.environ.get("FRACEIG_KERNELS", "").strip().lower()

if _requested in ("numpy", "python"):
    from . import _kernels_np as _impl

    BACKEND = "numpy"
elif _requested in ("", "cython"):
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_np as _impl  # type: ignore[no-redef]

        BACKEND = "numpy"
else:
    raise RuntimeError(f"unknown FRACEIG_KERNELS value: {_requested!r}")

apply_phi = _impl.apply_phi
energy_terms = _impl.energy_terms
newton_matrix = _impl.newton_matrix
