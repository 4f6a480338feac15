"""Gate-kernel backend selection.

The compiled Cython extension is preferred when available; the pure-numpy
implementation is the fallback. ``CONCATQEC_BACKEND=python`` or
``CONCATQEC_BACKEND=compiled`` forces the choice (the latter raises if the
extension was never built).
"""

import os

from . import py_kernels

_requested = os.environ.get("CONCATQEC_BACKEND", "").strip().lower()

if _requested == "python":
    kernels = py_kernels
elif _requested == "compiled":
    from . import _kernels as kernels  # noqa: F401  (ImportError is the intended signal)
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = py_kernels


def active_backend():
    """Name of the kernel backend in use: ``"compiled"`` or ``"python"``."""
    return kernels.name


def get_backend(name):
    """Fetch a backend module by name, independent of the active selection."""
    if name == "python":
        return py_kernels
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
