"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
used otherwise.  ``TRIAGE_KERNEL_BACKEND=numpy|cython`` forces a backend
(used by the benchmark and the backend-agreement tests).
"""

import os

from . import _kernels_np

try:
    from . import _kernels_cy
except ImportError:
    _kernels_cy = None


def available_backends():
    backends = {"numpy": _kernels_np}
    if _kernels_cy is not None:
        backends["cython"] = _kernels_cy
    return backends


def _select():
    requested = os.environ.get("TRIAGE_KERNEL_BACKEND", "").strip().lower()
    if requested == "numpy":
        return _kernels_np, "numpy"
    if requested == "cython":
        if _kernels_cy is None:
            raise ImportError(
                "TRIAGE_KERNEL_BACKEND=cython but the compiled extension is "
                "not available; reinstall with a C compiler present"
            )
        return _kernels_cy, "cython"
    if requested:
        raise ValueError(
            f"unknown TRIAGE_KERNEL_BACKEND {requested!r} (expected 'numpy' or 'cython')"
        )
    if _kernels_cy is not None:
        return _kernels_cy, "cython"
    return _kernels_np, "numpy"


_impl, BACKEND = _select()

rgb_to_gray = _impl.rgb_to_gray
convolve3x3 = _impl.convolve3x3
variance = _impl.variance
box_resize = _impl.box_resize
mean_abs_diff = _impl.mean_abs_diff
