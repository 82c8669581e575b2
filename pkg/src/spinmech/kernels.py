"""Kernel backend selection.

The compiled extension is preferred; set ``SPINMECH_PURE_PYTHON=1`` to force
the numpy fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("SPINMECH_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

j0 = _impl.j0
echo_cos_stats = _impl.echo_cos_stats
axial_dipole_field = _impl.axial_dipole_field


def available_backends():
    """Return ``{name: module}`` for every importable backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
