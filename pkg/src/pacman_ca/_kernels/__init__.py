"""Hot kernels, compiled when possible.

The Cython extension ``_ckernels`` is preferred; the numpy fallback in
``_pykernels`` is selected when the extension is missing or when the
environment variable ``PACMAN_CA_PURE`` is set to a non-empty value other
than ``0``.
"""
import os

from . import _pykernels

try:
    if os.environ.get("PACMAN_CA_PURE", "0") not in ("", "0"):
        raise ImportError("pure backend forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"


def get(name=None):
    """Return the kernel module named ``name`` (default: the active one)."""
    if name is None:
        name = BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
