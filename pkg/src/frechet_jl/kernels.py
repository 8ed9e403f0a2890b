"""Backend selection for the free-space kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``FRECHET_JL_PURE=1`` in the
environment forces the fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("FRECHET_JL_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

free_space = _impl.free_space
reach_frechet = _impl.reach_frechet
decide_frechet = _impl.decide_frechet
decide_weak_frechet = _impl.decide_weak_frechet
discrete_frechet = _impl.discrete_frechet


def available_backends():
    """Mapping of backend name to module for every importable backend."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
