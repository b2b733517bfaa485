"""Scalar minimization helpers: coarse grid scan plus golden-section polish."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-10) -> tuple[float, float]:
    """Minimize ``f`` on ``[lo, hi]`` assuming unimodality there.

    Returns ``(x, f(x))`` for the best point seen, endpoints included.
    """
    best = min(((lo, f(lo)), (hi, f(hi))), key=lambda p: p[1])
    if hi - lo <= tol:
        return best
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = f(d)
    for cand in ((c, fc), (d, fd)):
        if cand[1] < best[1]:
            best = cand
    return best


def scan_then_golden(f: Callable[[float], float], lo: float, hi: float, step: float,
                     tol: float = 1e-10) -> tuple[float, float]:
    """Global grid scan at ``step``, then golden section inside the best bracket.

    The scan guards against multimodality; unimodality is only assumed inside
    the bracket around the best grid point.
    """
    if hi <= lo:
        return lo, f(lo)
    n = max(1, int(math.ceil((hi - lo) / step - 1e-9)))
    grid = np.linspace(lo, hi, n + 1)
    values = np.array([f(float(s)) for s in grid])
    i = int(np.argmin(values))
    left = float(grid[max(i - 1, 0)])
    right = float(grid[min(i + 1, n)])
    s, v = golden_section(f, left, right, tol)
    if values[i] <= v:
        return float(grid[i]), float(values[i])
    return s, v
