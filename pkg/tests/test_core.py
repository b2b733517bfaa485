import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from growthpmp import (
    Control,
    DomainMismatch,
    InvalidInput,
    InvalidParams,
    Params,
    Process,
    ProblemKind,
    Trajectory,
    augment_mayer,
    check_feasibility,
    cost,
    integrate_control,
    synthesize,
)
from growthpmp.core import segment_integrals, split_process

from conftest import J_FP1_B, J_FP2_C_UD, J_RIDE_UNIT
from strategies import params, processes, simpson_cost


# -- Params -----------------------------------------------------------------


def test_params_normalizes_kind_and_floats():
    p = Params("FP2", 1, 2, 0, 1, 0)
    assert p.kind is ProblemKind.FP2
    assert isinstance(p.lam, float) and p.horizon == 1.0


@pytest.mark.parametrize("args", [
    ("fp1", 0.0, 2.0, 0.0, 1.0, 0.0),   # lam not positive
    ("fp1", 2.0, 2.0, 0.0, 1.0, 0.0),   # a == lam
    ("fp1", 2.0, 1.0, 0.0, 1.0, 0.0),   # a < lam
    ("fp1", 1.0, 2.0, -0.1, 1.0, 0.0),  # negative t0
    ("fp1", 1.0, 2.0, 1.0, 1.0, 0.0),   # empty horizon
    ("fp2", 1.0, 2.0, 0.0, 1.0, 1.5),   # FP2 start above the constraint
    ("fp1", 1.0, float("nan"), 0.0, 1.0, 0.0),
])
def test_params_rejects_invalid(args):
    with pytest.raises(InvalidParams):
        Params(*args)
    assert not Params.unchecked(*args).valid


def test_fp1_accepts_start_above_one():
    assert Params("fp1", 1, 2, 0, 1, 1.5).x0 == 1.5


def test_unknown_kind():
    with pytest.raises(InvalidInput):
        Params("fp3", 1, 2, 0, 1, 0)


def test_invalid_params_is_value_error():
    with pytest.raises(ValueError):
        Params("fp1", 2, 1, 0, 1, 0)


# -- integrate_control --------------------------------------------------------


def test_zero_control_freezes_state():
    p = Params("fp1", 1, 2, 0, 1, 0.7)
    x = integrate_control(p, Control.constant(0, 1, 0.0))
    np.testing.assert_array_equal(x.values, [0.7, 0.7])


def test_full_descent_slope():
    p = Params("fp1", 1, 2, 0, 1, 0)
    assert integrate_control(p, Control.constant(0, 1, 1.0))(1.0) == -2.0


def test_symmetric_up_down():
    p = Params("fp1", 1, 2, 0, 1, 0)
    x = integrate_control(p, Control.from_switches(0, 1, [0.5], [-1, 1]))
    assert x(0.5) == 1.0 and x(1.0) == 0.0


def test_integrate_rejects_out_of_box_control():
    p = Params("fp1", 1, 2, 0, 1, 0)
    with pytest.raises(InvalidInput):
        integrate_control(p, Control.constant(0, 1, 1.5))


def test_integrate_rejects_wrong_span():
    p = Params("fp1", 1, 2, 0, 1, 0)
    with pytest.raises(DomainMismatch):
        integrate_control(p, Control.constant(0, 0.9, 1.0))


def test_control_structure_checks():
    with pytest.raises(InvalidInput):
        Control([0, 1], [1, 1])
    with pytest.raises(InvalidInput):
        Control([0, 0.5, 0.5, 1], [1, 0, 1])
    with pytest.raises(InvalidInput):
        Control([0, 1], [np.inf])


def test_control_is_right_continuous_and_readonly():
    c = Control.from_switches(0, 1, [0.25], [-1, 1])
    assert c(0.25) == 1.0 and c(0.2499) == -1.0 and c(1.0) == 1.0
    with pytest.raises(ValueError):
        c.values[0] = 0.0


def test_from_switches_drops_empty_and_merges_equal_pieces():
    c = Control.from_switches(0, 1, [0.0, 0.5, 0.7], [1, -1, -1, 1])
    np.testing.assert_array_equal(c.breakpoints, [0, 0.7, 1])
    np.testing.assert_array_equal(c.values, [-1, 1])


def test_merged_removes_redundant_breaks():
    c = Control([0, 0.3, 0.6, 1], [1, 1, -1]).merged()
    np.testing.assert_array_equal(c.breakpoints, [0, 0.6, 1])


def test_process_requires_shared_breakpoints():
    p = Params("fp1", 1, 2, 0, 1, 0)
    with pytest.raises(InvalidInput):
        Process(p, Control.constant(0, 1, 0), Trajectory([0, 0.5, 1], [0, 0, 0]))


# -- cost ---------------------------------------------------------------------


def test_cost_riding_unit_level():
    p = Params("fp2", 1, 2, 0, 1, 1.0)
    proc = Process.from_control(p, Control.constant(0, 1, 0.0))
    assert math.isclose(cost(proc), J_RIDE_UNIT, rel_tol=0, abs_tol=1e-15)
    assert abs(simpson_cost(proc) - J_RIDE_UNIT) <= 1e-10


def test_cost_fp1_case_b_fixture(fp1_b):
    proc = synthesize(fp1_b).process
    assert abs(cost(proc) - J_FP1_B) <= 1e-15
    assert abs(simpson_cost(proc) - J_FP1_B) <= 1e-10


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9])
def test_cost_vanishes_with_horizon(eps):
    p = Params("fp1", 1, 2, 0.3, 0.3 + eps, 0.0)
    for u in (-1.0, 0.0, 1.0):
        J = cost(Process.from_control(p, Control.constant(p.t0, p.T, u)))
        assert abs(J) <= 3 * eps


@given(processes(kind="fp1"))
def test_cost_matches_simpson(proc):
    ref = simpson_cost(proc, n=400)
    assert abs(cost(proc) - ref) <= 1e-9 * (1 + abs(ref))


# -- Mayer state --------------------------------------------------------------


def test_mayer_starts_at_zero(fp1_b):
    assert augment_mayer(synthesize(fp1_b).process).values[0] == 0.0


def test_mayer_constant_state():
    lam, t0, T, x0 = 0.7, 0.2, 1.9, 0.4
    p = Params("fp1", lam, 2, t0, T, x0)
    x2 = augment_mayer(Process.from_control(p, Control.constant(t0, T, 0.0)))
    expected = -x0 * (math.exp(-lam * t0) - math.exp(-lam * T)) / lam
    assert math.isclose(x2.values[-1], expected, rel_tol=1e-14)


def test_mayer_equals_cost_case_c(fp2_c):
    proc = synthesize(fp2_c).process
    x2T = augment_mayer(proc).values[-1]
    assert math.isclose(x2T, cost(proc), rel_tol=1e-12)
    assert math.isclose(x2T, J_FP2_C_UD, rel_tol=1e-14)


@given(processes(kind="fp1"))
def test_mayer_consistency(proc):
    x2T = augment_mayer(proc).values[-1]
    J = cost(proc)
    assert abs(x2T - J) <= 1e-12 * max(1.0, abs(J))


@given(processes(kind="fp1"), st.floats(0.05, 0.95))
def test_cost_additivity(proc, frac):
    p = proc.params
    left, right = split_process(proc, p.t0 + frac * (p.T - p.t0))
    J = cost(proc)
    assert abs(cost(left) + cost(right) - J) <= 1e-12 * max(1.0, abs(J))


@given(processes(kind="fp1"), st.integers(2, 7))
def test_refinement_invariance(proc, k):
    # subdividing every segment leaves the exact cost unchanged
    bp = proc.breakpoints
    fine = np.unique(np.concatenate([np.linspace(a, b, k + 1) for a, b in zip(bp[:-1], bp[1:])]))
    u = proc.control(fine[:-1])
    refined = Process.from_control(proc.params, Control(fine, u))
    J = cost(proc)
    assert abs(cost(refined) - J) <= 1e-12 * max(1.0, abs(J))
    np.testing.assert_allclose(refined.trajectory(bp), proc.trajectory.values, atol=1e-12)


@given(processes(kind="fp1"))
def test_slopes_are_exact(proc):
    np.testing.assert_allclose(proc.trajectory.slopes, -proc.params.a * proc.control.values,
                               rtol=1e-9, atol=1e-9)


def test_segment_integrals_short_segment_accuracy():
    # expm1 keeps relative accuracy on tiny segments
    p = Params("fp1", 1, 2, 0, 1e-10, 0.5)
    proc = Process.from_control(p, Control.constant(0, 1e-10, 0.0))
    assert math.isclose(segment_integrals(proc)[0], -0.5e-10 * (1 - 0.5e-10), rel_tol=1e-12)


# -- feasibility --------------------------------------------------------------


def test_synthesized_processes_are_feasible(fp1_b, fp2_c):
    for p in (fp1_b, fp2_c):
        rep = check_feasibility(synthesize(p).process, 1e-12)
        assert rep.passed
        assert max(rep.dynamics_residual, rep.control_violation, rep.state_violation,
                   rep.initial_residual) <= 1e-12


def test_state_violation_measured():
    p = Params("fp2", 1, 2, 0, 1, 0)
    proc = Process(p, Control([0, 0.5, 1], [0, 0]), Trajectory([0, 0.5, 1], [0, 1.25, 0]))
    rep = check_feasibility(proc)
    assert rep.state_violation == 0.25 and not rep.passed


def test_control_violation_measured():
    p = Params("fp1", 1, 2, 0, 1, 0)
    proc = Process(p, Control([0, 1], [1.5]), Trajectory([0, 1], [0, -3]))
    rep = check_feasibility(proc)
    assert rep.control_violation == 0.5
    assert rep.dynamics_residual == 0.0
    assert rep.as_dict()["pass"] is False


@given(params())
def test_split_preserves_endpoints(p):
    proc = synthesize(p).process
    mid = 0.5 * (p.t0 + p.T)
    left, right = split_process(proc, mid)
    assert left.params.T == mid and right.params.t0 == mid
    assert right.params.x0 == pytest.approx(float(proc.trajectory(mid)), abs=1e-15)


def test_value_equality():
    a = Control.from_switches(0, 1, [0.5], [-1, 1])
    b = Control([0, 0.5, 1], [-1, 1])
    assert a == b and hash(a) == hash(b)
    assert a != Control([0, 0.5, 1], [-1, 0])
    assert Trajectory([0, 1], [0, 1]) == Trajectory([0.0, 1.0], [0.0, 1.0])
