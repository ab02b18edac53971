"""Dense-kernel backend selection.

Prefers the compiled extension hyperghz._kernels and falls back to the
numpy implementation in hyperghz._kernels_py.  Set HYPERGHZ_PURE_PYTHON=1
to force the fallback (used by the backend-equivalence tests and the
benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("HYPERGHZ_PURE_PYTHON", "0") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

apply_qudit_matrix = _impl.apply_qudit_matrix
add_spatial_into_oam = _impl.add_spatial_into_oam
register_probs = _impl.register_probs
