"""Backward dynamic programming on a (t, x) grid, independent of the syntheses.

Each step uses the exact stage cost of holding ``u`` over the step (the state
is linear in t there), successor values are linearly interpolated in x, and
successors that leave the grid (in particular above ``x = 1`` for FP2) are
assigned ``+inf`` instead of being projected back.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ..core import Control, Params, Process, ProblemKind, _discount_moments
from ..errors import ConfigurationError
from .kernels import active_backend, get_backward_sweep

_SNAP = 1e-9  # fractional grid offsets closer than this to a node snap onto it


@dataclass(frozen=True)
class DpConfig:
    nt: int
    nx: int
    x_min: float
    x_max: float
    control_set: tuple = (-1.0, 0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "control_set", tuple(sorted(float(u) for u in self.control_set)))
        if self.nt < 2 or self.nx < 2:
            raise ConfigurationError("need nt >= 2 and nx >= 2")
        if not self.x_min < self.x_max:
            raise ConfigurationError("need x_min < x_max")
        if not self.control_set or any(abs(u) > 1 for u in self.control_set):
            raise ConfigurationError("control set must be a nonempty subset of [-1, 1]")

    @classmethod
    def covering(cls, params: Params, nt: int = 2000, nx: int = 4001,
                 control_set=(-1.0, 0.0, 1.0)) -> "DpConfig":
        """Grid of width ``2 a (T - t0)`` around ``x0``, shifted under ``x = 1`` for FP2.

        With ``nx - 1 = 2 nt`` one full-speed step moves exactly one node.
        """
        reach = params.a * params.horizon
        lo, hi = params.x0 - reach, params.x0 + reach
        if params.kind is ProblemKind.FP2 and hi > 1.0:
            lo, hi = 1.0 - 2.0 * reach, 1.0
        return cls(nt, nx, lo, hi, control_set)

    def as_dict(self) -> dict:
        return {"nt": self.nt, "nx": self.nx, "x_min": self.x_min, "x_max": self.x_max,
                "control_set": list(self.control_set)}


@dataclass(frozen=True)
class DpResult:
    value: np.ndarray  # (nt + 1, nx) cost-to-go
    times: np.ndarray
    grid: np.ndarray
    process: Process
    cost: float
    config: DpConfig
    backend: str


def _check_config(params: Params, config: DpConfig) -> None:
    H = params.horizon
    umin, umax = min(config.control_set), max(config.control_set)
    lower = params.x0 - params.a * max(umax, 0.0) * H
    upper = params.x0 - params.a * min(umin, 0.0) * H
    eps = 1e-12 * (1.0 + abs(lower) + abs(upper))
    if params.kind is ProblemKind.FP2:
        if config.x_max > 1.0 + eps:
            raise ConfigurationError("FP2 grids must satisfy x_max <= 1")
        upper = min(upper, 1.0)
    if config.x_min > lower + eps or config.x_max < upper - eps:
        raise ConfigurationError(
            f"grid [{config.x_min!r}, {config.x_max!r}] does not cover the reachable "
            f"set [{lower!r}, {upper!r}]"
        )


def _split_shift(s: float) -> tuple[int, float]:
    k = math.floor(s)
    w = s - k
    if w < _SNAP:
        w = 0.0
    elif w > 1.0 - _SNAP:
        k, w = k + 1, 0.0
    return int(k), w


def _interp_inf(values: np.ndarray, x_min: float, dx: float, x: float) -> float:
    """Linear interpolation on the grid, ``inf`` off the grid or next to ``inf``."""
    k, w = _split_shift((x - x_min) / dx)
    n = values.size
    if k < 0 or k > n - 1 or (w > 0 and k + 1 > n - 1):
        return math.inf
    if w == 0.0:
        return float(values[k])
    return float((1.0 - w) * values[k] + w * values[k + 1])


def stage_coefficients(params: Params, times: np.ndarray, controls) -> tuple[np.ndarray, np.ndarray]:
    """Exact stage cost of step n under control u is ``c0[n, u] + c1[n] * x_n``."""
    h = np.diff(times)
    m0, m1 = _discount_moments(params.lam, times[:-1], h)
    u = np.asarray(controls, dtype=float)[None, :]
    c0 = -u * m0[:, None] + params.a * u * m1[:, None]
    c1 = -m0
    return c0, c1


def solve_dp(params: Params, config: DpConfig, backend: str = "auto") -> DpResult:
    params.validate()
    _check_config(params, config)
    sweep = get_backward_sweep(backend)
    used = active_backend() if backend == "auto" else backend

    times = np.linspace(params.t0, params.T, config.nt + 1)
    dt = params.horizon / config.nt
    grid = np.linspace(config.x_min, config.x_max, config.nx)
    dx = (config.x_max - config.x_min) / (config.nx - 1)
    controls = np.array(config.control_set)
    c0, c1 = stage_coefficients(params, times, controls)
    shifts = [_split_shift(-params.a * u * dt / dx) for u in controls]
    shift_idx = np.array([k for k, _ in shifts], dtype=np.intp)
    shift_w = np.array([w for _, w in shifts])

    V = sweep(c0, c1, grid, shift_idx, shift_w)
    value0 = _interp_inf(V[0], config.x_min, dx, params.x0)

    # forward greedy extraction with exact state propagation
    x = params.x0
    chosen = np.empty(config.nt)
    for n in range(config.nt):
        best_q, best_u = math.inf, None
        for c, u in enumerate(controls):
            x_next = x - params.a * u * dt
            q = c0[n, c] + c1[n] * x + _interp_inf(V[n + 1], config.x_min, dx, x_next)
            if q < best_q:
                best_q, best_u = q, u
        if best_u is None:
            raise ConfigurationError(f"no admissible control at step {n} from x={x!r}")
        chosen[n] = best_u
        x = x - params.a * best_u * dt
    control = Control(times, chosen).merged()
    process = Process.from_control(params, control)
    return DpResult(V, times, grid, process, value0, config, used)


def value_csv(result: DpResult, stride: int = 1) -> str:
    """Value grid as CSV rows ``t,x,value`` (every ``stride``-th node in t and x)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "x", "value"])
    for i in range(0, result.times.size, stride):
        t = repr(float(result.times[i]))
        row = result.value[i]
        for j in range(0, result.grid.size, stride):
            writer.writerow([t, repr(float(result.grid[j])), repr(float(row[j]))])
    return buf.getvalue()
