"""Kernel backend selection.

The compiled extension is preferred when importable; set
``GFRSCREEN_PURE_PYTHON=1`` to force the NumPy fallback. ``set_backend``
exists so the benchmark script and the parity tests can switch explicitly
within one process.
"""

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _kernels_c
except ImportError:
    _kernels_c = None
else:
    _BACKENDS["cython"] = _kernels_c

if os.environ.get("GFRSCREEN_PURE_PYTHON", "").strip() not in ("", "0"):
    _active = "python"
elif _kernels_c is not None:
    _active = "cython"
else:
    _active = "python"


def available_backends():
    """Names of importable kernel backends."""
    return sorted(_BACKENDS)


def active_backend():
    """Name of the backend currently in use."""
    return _active


def set_backend(name):
    """Switch the active backend ('cython' or 'python')."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}"
        )
    _active = name


def candidate_gains(resid_columns, residual, resid_norms_sq, norm_floor, out):
    _BACKENDS[_active].candidate_gains(resid_columns, residual, resid_norms_sq, norm_floor, out)


def append_columns(resid_columns, resid_norms_sq, residual, basis_buf,
                   n_basis, indices, norm_floors, orig_norms_sq):
    return _BACKENDS[_active].append_columns(
        resid_columns, resid_norms_sq, residual, basis_buf,
        n_basis, indices, norm_floors, orig_norms_sq)
