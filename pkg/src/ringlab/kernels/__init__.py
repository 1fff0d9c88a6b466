"""Hot-kernel backend selection.

The compiled Cython backend is used when importable; set RINGLAB_BACKEND=py
(or =c) to force a backend. Both expose the same four functions:
``rref``, ``nullspace``, ``solve``, ``batch_mul``.
"""

from __future__ import annotations

import os

from . import _pykernels

_FORCED = os.environ.get("RINGLAB_BACKEND", "").strip().lower()

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

if _FORCED in ("py", "python"):
    _impl = _pykernels
elif _FORCED == "c":
    if _ckernels is None:
        raise ImportError("RINGLAB_BACKEND=c but the compiled kernels are not built")
    _impl = _ckernels
else:
    _impl = _ckernels if _ckernels is not None else _pykernels

BACKEND = _impl.BACKEND_NAME

rref = _impl.rref
nullspace = _impl.nullspace
solve = _impl.solve
batch_mul = _impl.batch_mul


def available_backends():
    names = ["python"]
    if _ckernels is not None:
        names.append("c")
    return names


def get_backend(name):
    """Fetch a backend module by name (for cross-checks and benchmarks)."""
    if name in ("py", "python"):
        return _pykernels
    if name == "c":
        if _ckernels is None:
            raise KeyError("compiled kernels not built")
        return _ckernels
    raise KeyError(f"unknown backend {name!r}")
