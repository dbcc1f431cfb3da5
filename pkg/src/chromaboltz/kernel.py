"""Random kernel backend selection.

The compiled kernel (chromaboltz._speedups, Cython) and its pure-Python
twin implement the same xoshiro256** stream and the same CDF-inversion
variates, so either backend yields identical samples from a given seed.
The compiled one is preferred when importable; set
CHROMA_BOLTZ_BACKEND=python or =c to force a choice at import time.
"""

import os

from . import _kernel_py

__all__ = ["RandomStream", "backend_name", "stream_class",
           "available_backends"]


def stream_class(name: str):
    """RandomStream implementation for an explicit backend name."""
    if name in ("python", "py", "pure"):
        return _kernel_py.RandomStream
    if name in ("c", "compiled", "ext"):
        from ._speedups import RandomStream as compiled
        return compiled
    raise ValueError(f"unknown backend {name!r} (use 'c' or 'python')")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        stream_class("c")
        names.insert(0, "c")
    except ImportError:
        pass
    return names


_forced = os.environ.get("CHROMA_BOLTZ_BACKEND", "").strip().lower()
if _forced:
    RandomStream = stream_class(_forced)
    _backend = "c" if _forced in ("c", "compiled", "ext") else "python"
else:
    try:
        RandomStream = stream_class("c")
        _backend = "c"
    except ImportError:
        RandomStream = _kernel_py.RandomStream
        _backend = "python"


def backend_name() -> str:
    """Which kernel is active: 'c' (compiled) or 'python'."""
    return _backend
