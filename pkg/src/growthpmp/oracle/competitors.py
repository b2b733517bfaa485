"""Structured competitor processes with exact costs.

Families
--------
``D``
    ``u = +1`` throughout (pure descent).
``UD(s)``
    ``u = -1`` on ``[t0, s]``, ``+1`` afterwards.  For FP2 ``s <= alpha1``
    so that the peak respects ``x <= 1``.
``UBD(s)``
    FP2 only: ascend to ``x = 1`` at ``alpha1``, ride the boundary with
    ``u = 0`` until ``s``, then descend.  ``UBD(alpha1)`` is ``UD(alpha1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .._search import scan_then_golden
from ..core import Control, Params, Process, ProblemKind, cost
from ..synthesis import landmarks, synthesize


def descent_process(params: Params) -> Process:
    return Process.from_control(params, Control.constant(params.t0, params.T, 1.0))


def up_down_process(params: Params, s: float) -> Process:
    return Process.from_control(params, Control.from_switches(params.t0, params.T, [s], [-1.0, 1.0]))


def up_boundary_down_process(params: Params, s: float) -> Process:
    alpha1 = landmarks(params).alpha1
    control = Control.from_switches(params.t0, params.T, [alpha1, s], [-1.0, 0.0, 1.0])
    return Process.from_control(params, control)


@dataclass(frozen=True)
class CompetitorEntry:
    family: str
    s: Optional[float]
    cost: float


@dataclass(frozen=True)
class CompetitorResult:
    entries: tuple
    best: CompetitorEntry
    analytic_cost: float
    gap_to_analytic: float
    ud_at_alpha1: Optional[float] = None  # the touch-and-descend process (FP2)
    ubd_min: Optional[CompetitorEntry] = None
    ubd_gap: Optional[float] = None  # min UBD cost minus UD(alpha1) cost; sign not asserted

    def as_dict(self) -> dict:
        def entry(e):
            return None if e is None else {"family": e.family, "s": e.s, "cost": e.cost}

        return {
            "entries": [entry(e) for e in self.entries],
            "best": entry(self.best),
            "analytic_cost": self.analytic_cost,
            "gap_to_analytic": self.gap_to_analytic,
            "ud_at_alpha1": self.ud_at_alpha1,
            "ubd_min": entry(self.ubd_min),
            "ubd_gap": self.ubd_gap,
        }


def competitor_costs(params: Params, s_grid_step: float = 1e-3) -> CompetitorResult:
    params.validate()
    t0, T = params.t0, params.T
    entries = [CompetitorEntry("D", None, cost(descent_process(params)))]

    s_hi = T
    alpha1 = None
    if params.kind is ProblemKind.FP2:
        alpha1 = landmarks(params).alpha1
        s_hi = min(T, alpha1)
    s, c = scan_then_golden(lambda s: cost(up_down_process(params, s)), t0, s_hi, s_grid_step)
    entries.append(CompetitorEntry("UD", s, c))

    ud_alpha1 = ubd_min = ubd_gap = None
    if alpha1 is not None and alpha1 < T:
        ud_alpha1 = cost(up_down_process(params, alpha1))
        s, c = scan_then_golden(lambda s: cost(up_boundary_down_process(params, s)),
                                alpha1, T, s_grid_step)
        ubd_min = CompetitorEntry("UBD", s, c)
        entries.append(ubd_min)
        ubd_gap = ubd_min.cost - ud_alpha1

    best = min(entries, key=lambda e: e.cost)
    analytic = synthesize(params).cost
    return CompetitorResult(tuple(entries), best, analytic, best.cost - analytic,
                            ud_alpha1, ubd_min, ubd_gap)
