"""Maximum-principle machinery for the Mayer form of the problem family.

The Mayer state is ``(x1, x2)`` with ``x1' = -a u`` and
``x2' = -exp(-lam t) (x1 + u)``; the objective is ``x2(T)`` and the state
constraint (FP2 only) is ``h(t, x) = x1 - 1 <= 0``.  A multiplier set is
``(gamma, p, mu, nu)`` with ``p2`` constant, ``p1`` piecewise of the form
``A exp(-lam t) + B``, ``mu`` a nonnegative measure made of atoms plus a
piecewise-constant density, and ``nu`` a selection attached to the atoms.
The shifted adjoint is ``q = p + eta`` where ``eta(t)`` integrates ``nu dmu``
over ``[t0, t)`` (over ``[t0, T]`` at the terminal time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._search import scan_then_golden
from .core import RESIDUAL_TOL, Params, Process, ProblemKind
from .errors import DomainMismatch, InvalidInput, InvalidKind
from .synthesis import CaseLabel, SynthesisResult

DEFAULT_SELECTION = (1.0, 0.0)


@dataclass(frozen=True)
class AdjointArc:
    """``p2`` is constant; ``p1(t) = A exp(-lam t) + B`` on each segment."""

    lam: float
    p2: float
    segments: tuple  # ((t_start, t_end, A, B), ...)

    def __post_init__(self):
        segs = tuple(tuple(float(v) for v in s) for s in self.segments)
        if not segs:
            raise InvalidInput("an adjoint arc needs at least one segment")
        for s in segs:
            if len(s) != 4 or not s[0] < s[1]:
                raise InvalidInput(f"bad adjoint segment {s!r}")
        for left, right in zip(segs, segs[1:]):
            if left[1] != right[0]:
                raise InvalidInput("adjoint segments must tile the horizon")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "p2", float(self.p2))

    @property
    def t0(self) -> float:
        return self.segments[0][0]

    @property
    def T(self) -> float:
        return self.segments[-1][1]

    def _coeffs(self, t):
        t = np.asarray(t, dtype=float)
        starts = np.array([s[0] for s in self.segments])
        idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
        A = np.array([s[2] for s in self.segments])[idx]
        B = np.array([s[3] for s in self.segments])[idx]
        return t, A, B

    def p1(self, t):
        t, A, B = self._coeffs(t)
        return A * np.exp(-self.lam * t) + B

    def dp1(self, t):
        t, A, _ = self._coeffs(t)
        return -self.lam * A * np.exp(-self.lam * t)

    def joins(self) -> list[float]:
        return [s[1] for s in self.segments[:-1]]

    def join_jumps(self) -> list[float]:
        out = []
        for left, right in zip(self.segments, self.segments[1:]):
            e = math.exp(-self.lam * left[1])
            out.append(abs((left[2] * e + left[3]) - (right[2] * e + right[3])))
        return out

    def scaled(self, c: float) -> "AdjointArc":
        return AdjointArc(self.lam, c * self.p2,
                          tuple((s[0], s[1], c * s[2], c * s[3]) for s in self.segments))


@dataclass(frozen=True)
class Measure:
    atoms: tuple = ()    # ((t, weight), ...)
    density: tuple = ()  # ((t_start, t_end, rate), ...)

    def __post_init__(self):
        atoms = tuple((float(t), float(w)) for t, w in self.atoms)
        dens = tuple((float(a), float(b), float(r)) for a, b, r in self.density)
        if any(w < 0 or not math.isfinite(w) for _, w in atoms):
            raise InvalidInput("atom weights must be finite and nonnegative")
        if any(r < 0 or not a < b for a, b, r in dens):
            raise InvalidInput("density pieces need t_start < t_end and rate >= 0")
        ordered = sorted(dens)
        if any(prev[1] > nxt[0] for prev, nxt in zip(ordered, ordered[1:])):
            raise InvalidInput("density pieces must not overlap")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "density", tuple(ordered))

    @property
    def mass(self) -> float:
        return math.fsum([w for _, w in self.atoms] + [(b - a) * r for a, b, r in self.density])

    def scaled(self, c: float) -> "Measure":
        return Measure(tuple((t, c * w) for t, w in self.atoms),
                       tuple((a, b, c * r) for a, b, r in self.density))


@dataclass(frozen=True)
class Certificate:
    """Multiplier set ``(gamma, p, mu, nu)``.

    ``nu`` lists ``(t, v1, v2)`` for atoms whose selection differs from the
    default ``(1, 0)``; density pieces always use the default.  ``fit_residual``
    and ``fit_ok`` are filled in when the certificate came out of a best-fit
    search rather than a closed form.
    """

    gamma: float
    p: AdjointArc
    mu: Measure = field(default_factory=Measure)
    nu: tuple = ()
    fit_residual: Optional[float] = None
    fit_ok: Optional[bool] = None

    def selection(self, t: float) -> tuple[float, float]:
        for s, v1, v2 in self.nu:
            if s == t:
                return (float(v1), float(v2))
        return DEFAULT_SELECTION

    def scaled(self, c: float) -> "Certificate":
        return Certificate(c * self.gamma, self.p.scaled(c), self.mu.scaled(c), self.nu,
                           None if self.fit_residual is None else c * self.fit_residual,
                           self.fit_ok)


@dataclass(frozen=True)
class CertifyReport:
    res_support: float
    res_selection: float
    res_adjoint: float
    res_transversality: float
    res_maximum: float
    nontrivial: bool
    passed: bool
    tolerance: float
    sample_count: int

    @property
    def max_residual(self) -> float:
        return max(self.res_support, self.res_selection, self.res_adjoint,
                   self.res_transversality, self.res_maximum)

    def as_dict(self) -> dict:
        return {
            "res_support": self.res_support,
            "res_selection": self.res_selection,
            "res_adjoint": self.res_adjoint,
            "res_transversality": self.res_transversality,
            "res_maximum": self.res_maximum,
            "nontrivial": self.nontrivial,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "sample_count": self.sample_count,
        }


@dataclass(frozen=True)
class ExistenceReport:
    params_ok: bool
    growth_ok: bool
    growth_ratio: float
    growth_bound: float
    convexity_ok: bool
    passed: bool
    problems: tuple = ()

    def as_dict(self) -> dict:
        return {
            "params_ok": self.params_ok,
            "growth_ok": self.growth_ok,
            "growth_ratio": self.growth_ratio,
            "growth_bound": self.growth_bound,
            "convexity_ok": self.convexity_ok,
            "pass": self.passed,
            "problems": list(self.problems),
        }


# --------------------------------------------------------------------------
# pointwise objects


def hamiltonian(t, x1, p, u, params: Params):
    """``H = -a u p1 - exp(-lam t) (x1 + u) p2``; broadcasts over arrays."""
    p1, p2 = p
    return -params.a * u * p1 - np.exp(-params.lam * np.asarray(t, dtype=float)) * (x1 + u) * p2


def partial_hybrid_subdiff(x1: float) -> tuple:
    """Limiting gradients of ``x1 - 1`` along points where it is positive."""
    return ((1.0, 0.0),) if x1 >= 1.0 else ()


def _eta(cert_mu: Measure, selection, t, terminal):
    """Vectorized eta over an array of times (``terminal`` mask includes atoms at t)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    terminal = np.broadcast_to(np.asarray(terminal, dtype=bool), t.shape)
    eta1 = np.zeros_like(t)
    eta2 = np.zeros_like(t)
    for s, w in cert_mu.atoms:
        v1, v2 = selection(s)
        hit = (s < t) | (terminal & (s <= t))
        eta1 += np.where(hit, w * v1, 0.0)
        eta2 += np.where(hit, w * v2, 0.0)
    for a, b, r in cert_mu.density:
        eta1 += r * (np.clip(t, a, b) - a)
    return eta1, eta2


def _check_time(p: AdjointArc, t) -> None:
    t = np.asarray(t, dtype=float)
    scale = 1e-12 * (1.0 + abs(p.T))
    if np.any(t < p.t0 - scale) or np.any(t > p.T + scale):
        raise DomainMismatch(f"time outside the horizon [{p.t0!r}, {p.T!r}]")


def eta_and_q(p: AdjointArc, mu: Measure, nu: Sequence = (), t: float = 0.0,
              terminal: Optional[bool] = None):
    """Return ``(eta(t), q(t))`` as two 2-tuples.

    For ``t < T`` the accumulation runs over ``[t0, t)``; at the terminal time
    (``terminal=None`` means ``t == T``) atoms sitting at ``t`` are included.
    """
    _check_time(p, t)
    if terminal is None:
        terminal = t >= p.T
    cert = Certificate(0.0, p, mu, tuple(nu))
    e1, e2 = _eta(mu, cert.selection, t, terminal)
    eta = (float(e1[0]), float(e2[0]))
    q = (float(p.p1(t)) + eta[0], p.p2 + eta[1])
    return eta, q


def _q(cert: Certificate, t, terminal=False):
    e1, e2 = _eta(cert.mu, cert.selection, t, terminal)
    return cert.p.p1(t) + e1, cert.p.p2 + e2


def switching(certificate: Certificate, params: Params, t):
    """``phi(t) = a q1(t) + exp(-lam t) q2(t)``, the coefficient of ``u`` in -H."""
    _check_time(certificate.p, t)
    t_arr = np.asarray(t, dtype=float)
    q1, q2 = _q(certificate, t_arr, terminal=t_arr >= certificate.p.T)
    phi = params.a * q1 + np.exp(-params.lam * t_arr) * q2
    return float(phi[0]) if np.ndim(t) == 0 else phi


# --------------------------------------------------------------------------
# certificate construction


def unconstrained_certificate(params: Params, gamma: float = 1.0) -> Certificate:
    """Closed-form multipliers: ``p2 = -gamma``, ``p1 = gamma/lam (e^{-lam t} - e^{-lam T})``."""
    lam = params.lam
    arc = AdjointArc(lam, -gamma,
                     ((params.t0, params.T, gamma / lam, -gamma * math.exp(-lam * params.T) / lam),))
    return Certificate(gamma, arc, Measure())


def touch_certificate(params: Params, touch_time: float, weight: float,
                      gamma: float) -> Certificate:
    """Single-atom multipliers: atom ``weight`` at ``touch_time`` with selection (1, 0).

    Transversality ``q1(T) = 0`` fixes ``B``; at ``weight = 0`` this is the
    unconstrained certificate.
    """
    lam = params.lam
    B = -gamma * math.exp(-lam * params.T) / lam - weight
    arc = AdjointArc(lam, -gamma, ((params.t0, params.T, gamma / lam, B),))
    mu = Measure(((touch_time, weight),)) if weight > 0 else Measure()
    return Certificate(gamma, arc, mu)


def _sphere_point(theta: float) -> tuple[float, float]:
    # walk the unit-max sphere {max(m, gamma) = 1} in the nonnegative quadrant
    if theta <= 1.0:
        return theta, 1.0
    return 1.0, 2.0 - theta


def build_certificate(params: Params, synthesis: SynthesisResult,
                      tolerance: float = RESIDUAL_TOL, sample_count: int = 2001,
                      grid_step: float = 0.025) -> Certificate:
    if synthesis.case.kind is not params.kind:
        raise InvalidKind("synthesis case does not match the problem kind")
    if synthesis.case is not CaseLabel.FP2_c:
        return unconstrained_certificate(params)

    alpha1 = synthesis.landmarks.alpha1
    process = synthesis.process

    def objective(theta: float) -> float:
        m, g = _sphere_point(theta)
        cert = touch_certificate(params, alpha1, m, g)
        return certify(process, cert, tolerance, sample_count).max_residual

    theta, residual = scan_then_golden(objective, 0.0, 2.0, grid_step, tol=1e-9)
    m, g = _sphere_point(theta)
    cert = touch_certificate(params, alpha1, m, g)
    return Certificate(cert.gamma, cert.p, cert.mu, cert.nu,
                       fit_residual=residual, fit_ok=residual <= tolerance)


# --------------------------------------------------------------------------
# condition checking


def _time_below(process: Process, lo: float, hi: float, level: float) -> float:
    """Length of ``{t in [lo, hi] : x(t) < level}`` for the piecewise-linear arc."""
    bp = process.breakpoints
    x = process.trajectory.values
    total = 0.0
    for k in range(bp.size - 1):
        a, b = max(bp[k], lo), min(bp[k + 1], hi)
        if b <= a:
            continue
        xa, xb = np.interp([a, b], bp, x)
        if xa < level and xb < level:
            total += b - a
        elif xa < level or xb < level:
            cross = a + (level - xa) * (b - a) / (xb - xa)
            total += (cross - a) if xa < level else (b - cross)
    return total


def _active(x1, kind: ProblemKind, tol: float):
    if kind is ProblemKind.FP1:
        return np.zeros(np.shape(x1), dtype=bool)
    return np.asarray(x1) >= 1.0 - tol


def _near(samples: np.ndarray, times: Sequence[float], radius: float) -> np.ndarray:
    mask = np.zeros(samples.shape, dtype=bool)
    for s in times:
        mask |= np.abs(samples - s) < radius
    return mask


def certify(process: Process, certificate: Certificate, tolerance: float = RESIDUAL_TOL,
            sample_count: int = 10001) -> CertifyReport:
    """Residuals of the four maximum-principle conditions for ``process``.

    Condition (iv) holds only almost everywhere, so samples within half a
    sample spacing of control breakpoints and atom times are skipped.
    """
    params = process.params
    cert = certificate
    scale = 1e-12 * (1.0 + abs(params.T))
    if abs(cert.p.t0 - params.t0) > scale or abs(cert.p.T - params.T) > scale:
        raise DomainMismatch("certificate and process live on different horizons")
    if sample_count < 2:
        raise InvalidInput("sample_count must be at least 2")

    lam, a = params.lam, params.a
    samples = np.linspace(params.t0, params.T, sample_count)
    half = 0.5 * (params.T - params.t0) / (sample_count - 1)
    x_at = process.trajectory

    # (i) support and selection
    res_support = 0.0
    res_selection = 0.0
    for s, w in cert.mu.atoms:
        if not _active(float(x_at(s)), params.kind, tolerance):
            res_support += w
        else:
            v = np.asarray(cert.selection(s)) - np.asarray(DEFAULT_SELECTION)
            res_selection += w * float(np.max(np.abs(v)))
    for lo, hi, r in cert.mu.density:
        if params.kind is ProblemKind.FP1:
            res_support += r * (hi - lo)
        else:
            res_support += r * _time_below(process, lo, hi, 1.0 - tolerance)

    atom_times = [s for s, _ in cert.mu.atoms]
    q1, q2 = _q(cert, samples, terminal=samples >= params.T)

    # (ii) adjoint equation, exact derivative of the closed-form arc
    keep = ~_near(samples, atom_times + cert.p.joins(), half)
    adj = np.abs(cert.p.dp1(samples) - np.exp(-lam * samples) * q2)[keep]
    res_adjoint = max([float(adj.max()) if adj.size else 0.0] + cert.p.join_jumps())

    # (iii) transversality
    (_, (q1T, q2T)) = eta_and_q(cert.p, cert.mu, cert.nu, params.T, terminal=True)
    res_trans = max(abs(q1T), abs(q2T + cert.gamma))

    # (iv) maximization of H over u in [-1, 1]; H is affine in u
    interior_bp = list(process.breakpoints[1:-1])
    keep = ~_near(samples, interior_bp + atom_times, half)
    ts, x1 = samples[keep], x_at(samples[keep])
    qq = (q1[keep], q2[keep])
    u_bar = process.control(ts)
    h_bar = hamiltonian(ts, x1, qq, u_bar, params)
    h_best = np.maximum(hamiltonian(ts, x1, qq, -1.0, params),
                        hamiltonian(ts, x1, qq, 1.0, params))
    gap = h_best - h_bar
    res_max = float(np.max(gap)) if gap.size else 0.0
    res_max = max(res_max, 0.0)

    p_sup = float(np.max(np.abs(cert.p.p1(samples)))) if samples.size else 0.0
    size = max(p_sup, abs(cert.p.p2), cert.mu.mass, cert.gamma)
    nontrivial = size > 0.0
    residuals = (res_support, res_selection, res_adjoint, res_trans, res_max)
    passed = nontrivial and all(r <= tolerance for r in residuals)
    return CertifyReport(res_support, res_selection, res_adjoint, res_trans, res_max,
                         nontrivial, passed, tolerance, sample_count)


# --------------------------------------------------------------------------
# existence preflight


def _velocity(t, x1, u, params: Params):
    u = np.broadcast_to(u, np.shape(x1))
    return np.stack([-params.a * u, -np.exp(-params.lam * t) * (x1 + u)])


def preflight_existence(params: Params, sample_count: int = 21) -> ExistenceReport:
    """Check the existence-theorem hypotheses that depend on the parameters.

    Growth is sampled as ``|f| / (|x| + 1)`` against ``c = a + 1`` on
    ``|x| <= 10``; convexity of the velocity sets is confirmed by checking
    that ``f`` is affine in ``u`` (so ``u in [-1, 1]`` maps onto a segment).
    """
    problems = tuple(params.problems())
    params_ok = not problems
    t_hi = params.T if params.T > params.t0 else params.t0
    ts = np.linspace(params.t0, t_hi, sample_count)
    axis = np.linspace(-10.0, 10.0, sample_count)
    us = np.linspace(-1.0, 1.0, 5)
    T_, X1, X2, U = np.meshgrid(ts, axis, axis, us, indexing="ij")
    norm_x = np.hypot(X1, X2)
    inside = norm_x <= 10.0
    if params.kind is ProblemKind.FP2:
        inside &= X1 <= 1.0
    T_, X1, X2, U, norm_x = (arr[inside] for arr in (T_, X1, X2, U, norm_x))

    f = _velocity(T_, X1, U, params)
    ratio = float(np.max(np.hypot(f[0], f[1]) / (norm_x + 1.0))) if norm_x.size else 0.0
    bound = params.a + 1.0
    growth_ok = bool(ratio <= bound * (1.0 + 1e-12))

    f_lo = _velocity(T_, X1, -1.0, params)
    f_hi = _velocity(T_, X1, 1.0, params)
    s = (U + 1.0) / 2.0
    affine_gap = np.abs(f - ((1.0 - s) * f_lo + s * f_hi))
    convexity_ok = bool(np.all(affine_gap <= 1e-12 * (1.0 + np.abs(f))))

    passed = params_ok and growth_ok and convexity_ok
    return ExistenceReport(params_ok, growth_ok, ratio, bound, convexity_ok, passed, problems)
