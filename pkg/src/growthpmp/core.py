"""Problem data, exact control-to-state integration and exact costs.

Every process handled here is a right-continuous step control together with
the piecewise-linear state arc it generates through ``x' = -a u``.  All
integrals of the discounted integrand ``-exp(-lam t) (x + u)`` are evaluated
segment by segment with closed-form antiderivatives, so no quadrature error
enters any of the downstream checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainMismatch, InvalidInput, InvalidParams

#: Default tolerance for residual-style pass/fail verdicts.
RESIDUAL_TOL = 1e-9
#: Default tolerance for identities that hold exactly in real arithmetic.
EXACT_TOL = 1e-12


class ProblemKind(str, Enum):
    FP1 = "FP1"  # no state constraint
    FP2 = "FP2"  # unilateral constraint x(t) <= 1

    @classmethod
    def parse(cls, value: "ProblemKind | str") -> "ProblemKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise InvalidInput(f"unknown problem kind {value!r}") from None


class _ArrayPairEq:
    """Value equality and hashing for frozen dataclasses of two arrays."""

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} contains non-finite values")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Params:
    """The five problem parameters plus the problem kind.

    Construction validates the parameter invariants and raises
    :class:`InvalidParams` on violation.  Use :meth:`unchecked` to hold
    arbitrary finite values (e.g. for existence preflight or sweeps that
    cross the validity boundary).
    """

    kind: ProblemKind
    lam: float
    a: float
    t0: float
    T: float
    x0: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind.parse(self.kind))
        for name in ("lam", "a", "t0", "T", "x0"):
            object.__setattr__(self, name, float(getattr(self, name)))
        problems = self.problems()
        if problems:
            raise InvalidParams("; ".join(problems))

    @classmethod
    def unchecked(cls, kind, lam, a, t0, T, x0) -> "Params":
        obj = object.__new__(cls)
        object.__setattr__(obj, "kind", ProblemKind.parse(kind))
        for name, value in zip(("lam", "a", "t0", "T", "x0"), (lam, a, t0, T, x0)):
            object.__setattr__(obj, name, float(value))
        return obj

    def problems(self) -> list[str]:
        """Human-readable list of violated invariants (empty when valid)."""
        out = []
        values = (self.lam, self.a, self.t0, self.T, self.x0)
        if not all(math.isfinite(v) for v in values):
            return ["all parameters must be finite"]
        if not self.lam > 0:
            out.append(f"lambda must be > 0 (got {self.lam!r})")
        if not self.a > self.lam:
            out.append(f"a must exceed lambda (got a={self.a!r}, lambda={self.lam!r})")
        if not self.t0 >= 0:
            out.append(f"t0 must be >= 0 (got {self.t0!r})")
        if not self.T > self.t0:
            out.append(f"T must exceed t0 (got T={self.T!r}, t0={self.t0!r})")
        if self.kind is ProblemKind.FP2 and not self.x0 <= 1:
            out.append(f"FP2 requires x0 <= 1 (got {self.x0!r})")
        return out

    @property
    def valid(self) -> bool:
        return not self.problems()

    def validate(self) -> "Params":
        problems = self.problems()
        if problems:
            raise InvalidParams("; ".join(problems))
        return self

    @property
    def horizon(self) -> float:
        return self.T - self.t0

    def replace(self, **changes) -> "Params":
        fields = dict(kind=self.kind, lam=self.lam, a=self.a, t0=self.t0, T=self.T, x0=self.x0)
        fields.update(changes)
        return Params(**fields)


@dataclass(frozen=True, eq=False)
class Control(_ArrayPairEq):
    """Right-continuous step control: ``u(t) = values[k]`` on ``[s_k, s_{k+1})``.

    The last value also holds at ``t = T``.  Box membership ``|u| <= 1`` is
    not enforced here; :func:`integrate_control` requires it, while
    :func:`check_feasibility` measures the violation of hand-built processes.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = _frozen_array(self.breakpoints, "breakpoints")
        vals = _frozen_array(self.values, "control values")
        if vals.size < 1:
            raise InvalidInput("a control needs at least one segment")
        if bp.size != vals.size + 1:
            raise InvalidInput(
                f"expected {vals.size + 1} breakpoints for {vals.size} values, got {bp.size}"
            )
        if np.any(np.diff(bp) <= 0):
            raise InvalidInput("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, t0: float, T: float, value: float) -> "Control":
        return cls([t0, T], [value])

    @classmethod
    def from_switches(cls, t0: float, T: float, switch_times: Sequence[float],
                      values: Sequence[float]) -> "Control":
        """Build a control from interior switch times, dropping empty pieces."""
        if len(values) != len(switch_times) + 1:
            raise InvalidInput("need one more value than switch times")
        edges = [t0, *switch_times, T]
        bp, vals = [t0], []
        for k, v in enumerate(values):
            lo, hi = max(edges[k], bp[-1]), min(edges[k + 1], T)
            if hi <= lo:
                continue
            if vals and vals[-1] == v:
                bp[-1] = hi
            else:
                vals.append(float(v))
                bp.append(hi)
        return cls(bp, vals)

    @property
    def n_segments(self) -> int:
        return self.values.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.breakpoints, t, side="right") - 1
        idx = np.clip(idx, 0, self.values.size - 1)
        return self.values[idx]

    def merged(self) -> "Control":
        """Same control with redundant breakpoints (equal neighbours) removed."""
        keep = np.concatenate(([True], self.values[1:] != self.values[:-1]))
        bp = np.concatenate((self.breakpoints[:-1][keep], self.breakpoints[-1:]))
        return Control(bp, self.values[keep])


@dataclass(frozen=True, eq=False)
class Trajectory(_ArrayPairEq):
    """Piecewise-linear arc given by its node values on a breakpoint grid."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = _frozen_array(self.breakpoints, "breakpoints")
        vals = _frozen_array(self.values, "node values")
        if bp.size != vals.size or bp.size < 2:
            raise InvalidInput("a trajectory needs one node value per breakpoint (at least 2)")
        if np.any(np.diff(bp) <= 0):
            raise InvalidInput("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.values)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.breakpoints)


@dataclass(frozen=True)
class Process:
    """A control and a state arc on the same breakpoints, tied to Params.

    The constructor checks structure only.  Use :meth:`from_control` to get
    the exactly integrated arc; :func:`check_feasibility` quantifies how far
    a hand-assembled process is from being admissible.
    """

    params: Params
    control: Control
    trajectory: Trajectory

    def __post_init__(self):
        c, x = self.control.breakpoints, self.trajectory.breakpoints
        if c.size != x.size or np.any(c != x):
            raise InvalidInput("control and trajectory must share breakpoints")
        _check_span(self.params, c)

    @classmethod
    def from_control(cls, params: Params, control: Control) -> "Process":
        return cls(params, control, integrate_control(params, control))

    @property
    def breakpoints(self) -> np.ndarray:
        return self.control.breakpoints


@dataclass(frozen=True)
class FeasibilityReport:
    dynamics_residual: float
    control_violation: float
    state_violation: float
    initial_residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "dynamics_residual": self.dynamics_residual,
            "control_violation": self.control_violation,
            "state_violation": self.state_violation,
            "initial_residual": self.initial_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _check_span(params: Params, breakpoints: np.ndarray) -> None:
    scale = 1e-12 * (1.0 + abs(params.t0) + abs(params.T))
    if abs(breakpoints[0] - params.t0) > scale or abs(breakpoints[-1] - params.T) > scale:
        raise DomainMismatch(
            f"breakpoints span [{breakpoints[0]!r}, {breakpoints[-1]!r}], "
            f"horizon is [{params.t0!r}, {params.T!r}]"
        )


def integrate_control(params: Params, control: Control) -> Trajectory:
    """Exact state arc of ``x' = -a u`` started at ``x0``."""
    params.validate()
    bp = control.breakpoints
    _check_span(params, bp)
    if np.any(np.abs(control.values) > 1.0):
        raise InvalidInput("control values must lie in [-1, 1]")
    increments = -params.a * control.values * np.diff(bp)
    nodes = params.x0 + np.concatenate(([0.0], np.cumsum(increments)))
    return Trajectory(bp, nodes)


def _discount_moments(lam: float, s0: np.ndarray, h: np.ndarray):
    """Return ``m0 = int e^{-lam t}`` and ``m1 = int (t - s0) e^{-lam t}`` over ``[s0, s0+h]``.

    Written with expm1 so short segments keep full relative accuracy.
    """
    e0 = np.exp(-lam * s0)
    z = lam * h
    one_minus = -np.expm1(-z)  # 1 - e^{-z}
    m0 = e0 * one_minus / lam
    m1 = e0 * (one_minus - z * np.exp(-z)) / lam**2
    return m0, m1


def segment_integrals(process: Process) -> np.ndarray:
    """Per-segment values of ``int -e^{-lam t} (x(t) + u(t)) dt`` (exact)."""
    lam = process.params.lam
    bp = process.breakpoints
    h = np.diff(bp)
    x = process.trajectory.values
    u = process.control.values
    slope = np.diff(x) / h
    m0, m1 = _discount_moments(lam, bp[:-1], h)
    return -((x[:-1] + u) * m0 + slope * m1)


def cost(process: Process) -> float:
    """Exact objective value J(x, u)."""
    return -math.fsum(-segment_integrals(process))


def augment_mayer(process: Process) -> Trajectory:
    """The running-cost state x2 at the process breakpoints (x2(t0) = 0)."""
    pieces = segment_integrals(process)
    return Trajectory(process.breakpoints, np.concatenate(([0.0], np.cumsum(pieces))))


def check_feasibility(process: Process, tolerance: float = RESIDUAL_TOL) -> FeasibilityReport:
    params = process.params
    u = process.control.values
    x = process.trajectory.values
    dyn = float(np.max(np.abs(process.trajectory.slopes + params.a * u)))
    ctrl = float(np.max(np.maximum(np.abs(u) - 1.0, 0.0)))
    state = 0.0
    if params.kind is ProblemKind.FP2:
        state = float(np.max(np.maximum(x - 1.0, 0.0)))
    init = abs(float(x[0]) - params.x0)
    residuals = (dyn, ctrl, state, init)
    passed = all(r <= tolerance for r in residuals)
    return FeasibilityReport(dyn, ctrl, state, init, tolerance, passed)


def split_process(process: Process, t_split: float) -> tuple[Process, Process]:
    """Cut a process at an interior time into two processes on sub-horizons."""
    p = process.params
    if not p.t0 < t_split < p.T:
        raise DomainMismatch("split time must be strictly inside the horizon")
    bp = process.breakpoints
    x_split = float(process.trajectory(t_split))
    left = bp < t_split
    right = bp > t_split
    bp_l = np.concatenate((bp[left], [t_split]))
    bp_r = np.concatenate(([t_split], bp[right]))
    x_l = np.concatenate((process.trajectory.values[left], [x_split]))
    x_r = np.concatenate(([x_split], process.trajectory.values[right]))
    u_l = process.control(bp_l[:-1])
    u_r = process.control(bp_r[:-1])
    p_l = Params.unchecked(p.kind, p.lam, p.a, p.t0, t_split, p.x0)
    p_r = Params.unchecked(p.kind, p.lam, p.a, t_split, p.T, x_split)
    return (
        Process(p_l, Control(bp_l, u_l), Trajectory(bp_l, x_l)),
        Process(p_r, Control(bp_r, u_r), Trajectory(bp_r, x_r)),
    )
