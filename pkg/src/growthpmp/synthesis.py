"""Closed-form optimal syntheses for the unconstrained and constrained problems.

Landmarks
---------
``rho = ln(a / (a - lam)) / lam`` is the length of the final descent in the
unconstrained solution, ``tbar = T - rho`` is the switch time, and for the
constrained problem ``alpha1 = t0 + (1 - x0) / a`` is the time the maximal
ascent hits ``x = 1`` while ``xbar0 = 1 - a (tbar - t0)`` is the initial
stock above which that ascent touches the boundary before ``tbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .core import Control, Params, Process, ProblemKind, cost
from .errors import InvalidKind


class CaseLabel(str, Enum):
    FP1_A = "FP1_A"  # short horizon: pure descent
    FP1_B = "FP1_B"  # ascend until tbar, then descend
    FP2_a = "FP2_a"
    FP2_b = "FP2_b"  # as FP1_B with peak strictly below 1
    FP2_c = "FP2_c"  # ascend to x = 1 at alpha1, then descend

    @property
    def kind(self) -> ProblemKind:
        return ProblemKind.FP1 if self.value.startswith("FP1") else ProblemKind.FP2


@dataclass(frozen=True)
class Landmarks:
    rho: float
    tbar: float
    alpha1: Optional[float] = None
    xbar0: Optional[float] = None


@dataclass(frozen=True)
class SynthesisResult:
    case: CaseLabel
    landmarks: Landmarks
    process: Process
    cost: float
    switch_times: tuple = ()
    peak: Optional[float] = field(default=None)  # x(tbar) in the up-down cases


def descent_length(lam: float, a: float) -> float:
    # ln(a/(a-lam)) = -ln(1 - lam/a)
    return -math.log1p(-lam / a) / lam


def landmarks(params: Params) -> Landmarks:
    params.validate()
    rho = descent_length(params.lam, params.a)
    tbar = params.T - rho
    if params.kind is ProblemKind.FP1:
        return Landmarks(rho, tbar)
    alpha1 = params.t0 + (1.0 - params.x0) / params.a
    xbar0 = 1.0 - params.a * (tbar - params.t0)
    return Landmarks(rho, tbar, alpha1, xbar0)


def classify(params: Params) -> CaseLabel:
    lm = landmarks(params)
    short = params.T - params.t0 <= lm.rho
    if params.kind is ProblemKind.FP1:
        return CaseLabel.FP1_A if short else CaseLabel.FP1_B
    if short:
        return CaseLabel.FP2_a
    return CaseLabel.FP2_b if params.x0 < lm.xbar0 else CaseLabel.FP2_c


def process_for_case(params: Params, case: CaseLabel) -> tuple[Process, tuple]:
    """Build the process given by the closed-form formula of ``case``.

    The formula is applied even when ``params`` would classify differently,
    which is what the case-boundary continuity checks need.  Returns the
    process and its switch times.
    """
    params.validate()
    if case.kind is not params.kind:
        raise InvalidKind(f"case {case.value} does not apply to kind {params.kind.value}")
    lm = landmarks(params)
    t0, T = params.t0, params.T
    if case in (CaseLabel.FP1_A, CaseLabel.FP2_a):
        switch = None
    elif case in (CaseLabel.FP1_B, CaseLabel.FP2_b):
        switch = lm.tbar
    else:
        switch = lm.alpha1
    if switch is None or switch <= t0:
        control = Control.constant(t0, T, 1.0)
        switches = ()
    else:
        switch = min(switch, T)
        control = Control.from_switches(t0, T, [switch], [-1.0, 1.0])
        switches = (switch,) if switch < T else ()
    return Process.from_control(params, control), switches


def _result(params: Params, case: CaseLabel) -> SynthesisResult:
    lm = landmarks(params)
    process, switches = process_for_case(params, case)
    peak = None
    if case in (CaseLabel.FP1_B, CaseLabel.FP2_b):
        peak = params.x0 + params.a * (lm.tbar - params.t0)
    return SynthesisResult(case, lm, process, cost(process), switches, peak)


def synthesize_fp1(params: Params) -> SynthesisResult:
    if params.kind is not ProblemKind.FP1:
        raise InvalidKind("synthesize_fp1 needs kind FP1")
    return _result(params, classify(params))


def synthesize_fp2(params: Params) -> SynthesisResult:
    if params.kind is not ProblemKind.FP2:
        raise InvalidKind("synthesize_fp2 needs kind FP2")
    return _result(params, classify(params))


def synthesize(params: Params) -> SynthesisResult:
    """Dispatch on ``params.kind``."""
    if params.kind is ProblemKind.FP1:
        return synthesize_fp1(params)
    return synthesize_fp2(params)
