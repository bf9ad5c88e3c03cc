"""Hot-kernel backend selection.

The compiled extension is preferred when available; the NumPy fallback is
always present. Selection is controlled by the FELLER_KIT_KERNELS
environment variable: "auto" (default), "c" (require the extension), or
"py" (force the fallback).

Scalar double-double helpers always come from the fallback module: they are
exact float64 operation sequences, so there is nothing to accelerate or to
diverge from.
"""

from __future__ import annotations

import os

from . import _kernels_py as _py
from ._kernels_py import (
    dd_add,
    dd_div_d,
    dd_mul,
    toeplitz_matvec_fft,
    two_prod,
    two_sum,
)

__all__ = [
    "backend_name",
    "two_sum",
    "two_prod",
    "dd_add",
    "dd_mul",
    "dd_div_d",
    "dd_axpy",
    "dd_shifted_residual",
    "toeplitz_matvec",
    "toeplitz_matvec_direct",
    "toeplitz_matvec_fft",
]

_requested = os.environ.get("FELLER_KIT_KERNELS", "auto").strip().lower()
if _requested not in ("auto", "c", "py"):
    raise RuntimeError(
        f"FELLER_KIT_KERNELS must be auto, c, or py (got {_requested!r})"
    )

_impl = _py
_backend = "python"
if _requested in ("auto", "c"):
    try:
        from . import _kernels_c as _c

        _impl = _c
        _backend = "c"
    except ImportError:
        if _requested == "c":
            raise
        # auto: stay on the fallback

dd_axpy = _impl.dd_axpy
dd_shifted_residual = _impl.dd_shifted_residual
toeplitz_matvec_direct = _impl.toeplitz_matvec_direct

# Direct O(n^2) application wins below roughly this size; the circulant FFT
# path wins above it. The compiled loop extends the direct range.
_DIRECT_MAX = 384 if _backend == "c" else 96


def backend_name():
    """Name of the active backend: 'c' or 'python'."""
    return _backend


def toeplitz_matvec(k, F):
    """Symmetric Toeplitz apply, routed to the faster path for the size."""
    n = len(k)
    if n <= _DIRECT_MAX:
        return toeplitz_matvec_direct(k, F)
    return toeplitz_matvec_fft(k, F)
