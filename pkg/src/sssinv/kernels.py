"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; the pure-numpy fallback
is used otherwise.  Set ``SSSINV_BACKEND=python`` or ``SSSINV_BACKEND=compiled``
to force a choice (forcing ``compiled`` raises if the extension is missing).
"""

import os

from . import _kernels_py

FLAG_EXPANDED = _kernels_py.FLAG_EXPANDED
FLAG_DEGRADED = _kernels_py.FLAG_DEGRADED
FLAG_FALLBACK = _kernels_py.FLAG_FALLBACK
BW_MARGIN = _kernels_py.BW_MARGIN

KERNEL_IDS = {"epanechnikov": 0, "gaussian": 1}


def _select():
    choice = os.environ.get("SSSINV_BACKEND", "").strip().lower()
    if choice == "python":
        return _kernels_py, "python"
    try:
        from . import _ckernels
    except ImportError:
        if choice == "compiled":
            raise ImportError(
                "SSSINV_BACKEND=compiled but the sssinv._ckernels extension "
                "is not built; reinstall with a C compiler and Cython")
        return _kernels_py, "python"
    return _ckernels, "compiled"


_impl, BACKEND = _select()

loclin_grid = _impl.loclin_grid
sgd_epoch = _impl.sgd_epoch


def get_backend():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
