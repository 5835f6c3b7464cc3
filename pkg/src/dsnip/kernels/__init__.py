"""Backend selection for the hot numeric kernels.

Each kernel ships two interchangeable implementations: a numba ``@njit``
one and a plain numpy/Python fallback. The active path is chosen by the
``DSNIP_BACKEND`` environment variable (``numba``, ``numpy``, or ``auto``),
re-read on every call so tests and benchmarks can flip it; an explicit
``backend=`` argument wins over the environment.
"""
from __future__ import annotations

import os

ENV_VAR = "DSNIP_BACKEND"

try:
    import numba  # noqa: F401
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def resolve_backend(backend: str | None = None) -> str:
    """Pick the implementation to run: explicit argument > env var > auto."""
    name = backend if backend is not None else os.environ.get(ENV_VAR, "auto")
    name = name.strip().lower() or "auto"
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choose one of {BACKENDS} or 'auto'")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return name
