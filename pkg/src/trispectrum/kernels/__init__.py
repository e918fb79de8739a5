"""Backend selection for the hot matrix kernels.

The numba backend is used when numba imports cleanly, unless the
environment variable ``TRISPECTRUM_DISABLE_NUMBA`` is set to a true value
("1", "true", "yes").  Both backends expose the same functions and produce
identical results; see ``benchmarks/bench_kernels.py`` for timings.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

__all__ = ["backend", "get_backend", "BACKEND_NAME", "numba_available"]


def _env_disabled() -> bool:
    return os.environ.get("TRISPECTRUM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


def numba_available() -> bool:
    try:
        importlib.import_module("numba")
    except ImportError:
        return False
    return True


def get_backend(name: str) -> ModuleType:
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    if name == "numba":
        from . import numba_impl

        return numba_impl
    raise ValueError(f"unknown kernel backend {name!r}")


backend: ModuleType = get_backend("numpy" if _env_disabled() or not numba_available() else "numba")
BACKEND_NAME: str = backend.name
