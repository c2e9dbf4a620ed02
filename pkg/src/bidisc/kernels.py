"""Kernel backend selection.

The compiled extension is preferred when importable; ``BIDISC_PURE_PYTHON=1``
forces the numpy fallback.  Both backends run the same per-sample arithmetic
and agree to floating-point roundoff; results are bit-reproducible within a
fixed backend.
"""

import os

if os.environ.get("BIDISC_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
eval_poly2 = _impl.eval_poly2
eval_rational2 = _impl.eval_rational2
box_hits = _impl.box_hits
