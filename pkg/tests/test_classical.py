import math

import numpy as np
import pytest

from algebra.errors import AngleUnwindingError, ContractViolation, IntegrationError, ReductionUnavailable
from dynamics.classical import (CSV_COLUMNS, ClassicalState, drift_report, integrate_full, invariants,
                                order_study, predicted_xi_slope, reduce_and_integrate, reduce_state, rhs_full,
                                signs_preserved, unwind, xi_check)
from dynamics.integrators import RK45, rk4_integrate, time_grid

FLAT_STATE = ClassicalState(1, 0, 1, 0, 1, 1)
DRIFTING_STATE = ClassicalState(1, 0, 2, 0, 1, 1)


def test_rhs_at_reference_state(params):
    d = rhs_full(FLAT_STATE, params)
    assert (d.P, d.Q, d.R, d.A, d.B, d.C) == pytest.approx((0, 10, 0, 2, 0, 0))


def test_invariants_at_reference_state(params):
    inv = invariants(FLAT_STATE, params)
    assert inv.I1sq == pytest.approx(1) and inv.I2sq == pytest.approx(1)
    assert inv.L == pytest.approx(0)
    assert inv.Lambda == pytest.approx(1)
    assert invariants(DRIFTING_STATE, params).L == pytest.approx(1)
    assert invariants(DRIFTING_STATE, params).Lambda == pytest.approx(2 ** 0.25)


def test_lambda_needs_positive_r_and_c(params):
    assert not invariants(ClassicalState(1, 0, -1, 0, 1, 1), params).lambda_available


def test_state_needs_six_components():
    with pytest.raises(ContractViolation):
        ClassicalState.from_sequence([1, 2, 3])


def test_reduced_state(params):
    r0 = reduce_state(DRIFTING_STATE, params)
    assert r0.theta == pytest.approx(math.pi / 2)
    assert (r0.I1, r0.I2) == pytest.approx((1, 1))
    assert predicted_xi_slope(params, 1.0) == pytest.approx(64)


def test_long_run_conserves_integrals(params):
    traj = integrate_full(DRIFTING_STATE, params, t_end=5.0, dt=1e-4, sample_every=10)
    assert traj.angle_error is None
    drift = drift_report(traj)
    assert set(drift) == {"I1sq", "I2sq", "L", "Lambda"}
    assert max(drift.values()) < 1e-6
    assert signs_preserved(traj)
    fit = xi_check(traj, params)
    assert fit.predicted_slope == pytest.approx(64)
    assert fit.relative_error < 1e-4
    assert fit.max_residual < 1e-4


def test_reduced_system_matches_full_flow(params):
    reduced = reduce_and_integrate(DRIFTING_STATE, params, t_end=2.0, dt=1e-3)
    assert reduced.max_deviation < 1e-6
    assert reduced.rc_identity_residual < 1e-6
    assert xi_check(reduced, params).relative_error < 1e-4


def test_flat_state_has_constant_xi(params):
    traj = integrate_full(FLAT_STATE, params, t_end=1.0, dt=1e-3)
    fit = xi_check(traj, params)
    assert fit.predicted_slope == 0
    assert abs(fit.slope) < 1e-6


def test_rows_follow_csv_columns(params):
    traj = integrate_full(DRIFTING_STATE, params, t_end=0.1, dt=1e-2)
    assert len(CSV_COLUMNS) == 14
    rows = traj.rows()
    assert len(rows) == len(traj.times) == 11
    assert all(len(row) == 14 for row in rows)
    assert rows[0][:7] == pytest.approx([0, 1, 0, 2, 0, 1, 1])


def test_rk45_agrees_with_rk4(params):
    fixed = integrate_full(DRIFTING_STATE, params, t_end=1.0, dt=1e-3, sample_every=100)
    adaptive = integrate_full(DRIFTING_STATE, params, t_end=1.0, dt=1e-3, method=RK45, sample_every=100)
    assert np.allclose(fixed.times, adaptive.times)
    assert np.max(np.abs(fixed.states - adaptive.states)) < 1e-5


def test_rk4_is_fourth_order(params):
    study = order_study(DRIFTING_STATE, params, t_end=1.0, dt=0.005)
    assert study.drift_fine < study.drift_coarse
    assert 8 < study.ratio < 32


def test_reduction_unavailable(params):
    with pytest.raises(ReductionUnavailable):
        reduce_state(ClassicalState(0, 0, 1, 1, 0, 1), params)
    with pytest.raises(ReductionUnavailable):
        reduce_and_integrate(ClassicalState(1, 0, 1, 0, 0, 1), params, t_end=1.0, dt=1e-2)


def test_unwind():
    raw = np.angle(np.exp(1j * np.linspace(0, 10, 200)))
    assert np.allclose(unwind(raw), np.linspace(0, 10, 200))
    with pytest.raises(AngleUnwindingError):
        unwind(np.array([0.0, 2.0]))


def test_rk4_exponential():
    times, samples = rk4_integrate(lambda y: y, np.array([1.0]), t_end=1.0, dt=0.01)
    assert times[-1] == pytest.approx(1.0)
    assert samples[-1, 0] == pytest.approx(math.e, abs=1e-8)


def test_rk4_sampling():
    times, samples = rk4_integrate(lambda y: -y, np.array([1.0]), t_end=1.0, dt=0.1, sample_every=3)
    assert times == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.0])
    assert samples.shape == (5, 1)


def test_rk4_blowup_raises():
    with pytest.raises(IntegrationError) as info:
        rk4_integrate(lambda y: y * y, np.array([1.0]), t_end=2.0, dt=0.01)
    assert info.value.time is not None and info.value.time < 2.0


def test_time_grid():
    assert time_grid(1.0, 0.3) == (4, 0.25)
    assert time_grid(1.0, 0.25) == (4, 0.25)
    with pytest.raises(ContractViolation):
        time_grid(1.0, 0.0)
