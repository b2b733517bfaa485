"""Numpy implementation of the backward value-iteration sweep.

Used when the compiled kernel is unavailable; the compiled kernel must
produce the same array up to floating-point reassociation.
"""

from __future__ import annotations

import numpy as np


def backward_sweep(c0, c1, grid, shift_idx, shift_w):
    """Backward induction on a uniform state grid.

    Parameters
    ----------
    c0 : (nt, nc) array
        Control-dependent part of the exact stage cost of step ``n``.
    c1 : (nt,) array
        Coefficient of ``x`` in the stage cost (it does not depend on ``u``).
    grid : (nx,) array
        State nodes.
    shift_idx, shift_w : (nc,) arrays
        Successor of node ``j`` under control ``c`` sits at fractional index
        ``j + shift_idx[c] + shift_w[c]`` with ``0 <= shift_w < 1``.

    Returns
    -------
    V : (nt + 1, nx) array
        Cost-to-go, ``+inf`` where every control leaves the grid.
    """
    c0 = np.asarray(c0, dtype=float)
    c1 = np.asarray(c1, dtype=float)
    grid = np.asarray(grid, dtype=float)
    nt, nc = c0.shape
    nx = grid.size
    V = np.empty((nt + 1, nx))
    V[nt] = 0.0

    ranges = []
    for k, w in zip(shift_idx, shift_w):
        k = int(k)
        lo = max(0, -k)
        hi = min(nx, nx - k - (1 if w > 0 else 0))
        ranges.append((k, float(w), lo, hi))

    cont = np.empty(nx)
    best = np.empty(nx)
    for n in range(nt - 1, -1, -1):
        nxt = V[n + 1]
        best.fill(np.inf)
        base = c1[n] * grid
        for c, (k, w, lo, hi) in enumerate(ranges):
            if hi <= lo:
                continue
            cont.fill(np.inf)
            seg = nxt[lo + k:hi + k]
            if w > 0:
                cont[lo:hi] = (1.0 - w) * seg + w * nxt[lo + k + 1:hi + k + 1]
            else:
                cont[lo:hi] = seg
            np.minimum(best, cont + (base + c0[n, c]), out=best)
        V[n] = best
    return V
