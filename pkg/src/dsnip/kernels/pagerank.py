"""Power-iteration PageRank over a directed edge list.

Inputs are plain arrays: ``src``/``dst`` hold one entry per transition,
``out_deg[i]`` the number of outgoing transitions of node ``i``. Nodes with
``out_deg == 0`` spread their mass uniformly. Iteration stops when the L1
change drops below ``tol`` or after ``max_iter`` rounds; the result always
sums to 1 for ``n >= 1``.
"""
from __future__ import annotations

import numpy as np

from . import HAS_NUMBA, resolve_backend

if HAS_NUMBA:
    from numba import njit


def _pagerank_numpy(src, dst, out_deg, n, damping, tol, max_iter):
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    x = np.full(n, 1.0 / n, dtype=np.float64)
    safe = np.where(out_deg > 0.0, out_deg, 1.0)
    dangling = out_deg == 0.0
    for _ in range(max_iter):
        contrib = x / safe
        nxt = np.bincount(dst, weights=contrib[src], minlength=n)
        base = damping * float(x[dangling].sum()) / n + (1.0 - damping) / n
        nxt = damping * nxt + base
        err = float(np.abs(nxt - x).sum())
        x = nxt
        if err < tol:
            break
    return x


if HAS_NUMBA:

    @njit(cache=True)
    def _pagerank_numba(src, dst, out_deg, n, damping, tol, max_iter):  # pragma: no cover - numba
        x = np.full(n, 1.0 / n)
        nxt = np.empty(n)
        for _ in range(max_iter):
            for i in range(n):
                nxt[i] = 0.0
            d_mass = 0.0
            for i in range(n):
                if out_deg[i] == 0.0:
                    d_mass += x[i]
            for e in range(src.shape[0]):
                nxt[dst[e]] += x[src[e]] / out_deg[src[e]]
            base = damping * d_mass / n + (1.0 - damping) / n
            err = 0.0
            for i in range(n):
                v = damping * nxt[i] + base
                err += abs(v - x[i])
                nxt[i] = v
            tmp = x
            x = nxt
            nxt = tmp
            if err < tol:
                break
        return x


def pagerank(src: np.ndarray, dst: np.ndarray, out_deg: np.ndarray, n: int,
             damping: float, tol: float, max_iter: int,
             backend: str | None = None) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.float64)
    if resolve_backend(backend) == "numba":
        return _pagerank_numba(src.astype(np.int64), dst.astype(np.int64),
                               out_deg.astype(np.float64), n, damping, tol, max_iter)
    return _pagerank_numpy(src, dst, out_deg, n, damping, tol, max_iter)
