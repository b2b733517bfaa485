"""Turning-point structure of a process away from the state boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Process


@dataclass(frozen=True)
class StructureReport:
    intervals: tuple      # ((start, end), ...) maximal pieces with x < 1 - tol
    turning_points: tuple  # count per interval
    max_turning_points: int
    merged_slopes: tuple   # slope sequence per interval after merging

    def as_dict(self) -> dict:
        return {
            "intervals": [list(iv) for iv in self.intervals],
            "turning_points": list(self.turning_points),
            "max_turning_points": self.max_turning_points,
        }


def _merge(runs: list, tol: float) -> list:
    """Merge neighbouring (length, slope) runs whose slopes agree within ``tol``."""
    merged = []
    for length, slope in runs:
        if merged and abs(merged[-1][1] - slope) <= tol:
            L, s = merged[-1]
            merged[-1] = (L + length, (L * s + length * slope) / (L + length))
        else:
            merged.append((length, slope))
    return merged


def _reversals(slopes, tol: float) -> int:
    signs = [np.sign(s) for s in slopes if abs(s) > tol]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def extract_structure(process: Process, merge_tolerance: float) -> StructureReport:
    """Count slope-sign reversals on each maximal stretch where ``x < 1 - tol``.

    Flat pieces (``|slope| <= tol``) do not count as a direction.
    """
    bp = process.breakpoints
    x = process.trajectory.values
    slopes = process.trajectory.slopes
    level = 1.0 - merge_tolerance

    intervals, pieces = [], []
    current, start = [], None

    def close(end):
        nonlocal current, start
        if current:
            intervals.append((start, end))
            pieces.append(current)
        current, start = [], None

    for k in range(bp.size - 1):
        a, b = bp[k], bp[k + 1]
        xa, xb = x[k], x[k + 1]
        below_a, below_b = xa < level, xb < level
        if below_a and below_b:
            if start is None:
                start = a
            current.append((b - a, slopes[k]))
        elif below_a or below_b:
            cross = a + (level - xa) * (b - a) / (xb - xa)
            if below_a:
                if start is None:
                    start = a
                current.append((cross - a, slopes[k]))
                close(cross)
            else:
                close(a)
                start = cross
                current.append((b - cross, slopes[k]))
        else:
            close(a)
    close(bp[-1])

    merged = [_merge(p, merge_tolerance) for p in pieces]
    counts = tuple(_reversals([s for _, s in m], merge_tolerance) for m in merged)
    return StructureReport(tuple(intervals), counts, max(counts, default=0),
                           tuple(tuple(s for _, s in m) for m in merged))
