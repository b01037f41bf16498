from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dynamics import equations
from dynamics.exceptions import DomainError
from dynamics.states import PrimalState
from integrator.EventSpec import Chart, EventKind, EventSpec
from integrator.integrator import continue_trajectory, integrate


def decay(y, lam=0.0):
    return -y


def grow(y, lam=0.0):
    return y


def descend(y, lam=0.0):
    return -np.ones_like(y)


def square(y, lam=0.0):
    return y * y


def test_linear_decay():
    traj = integrate(decay, [1.0], 1.0)
    assert traj.final_time == 1.0
    assert traj.final_state[0] == pytest.approx(np.exp(-1.0), rel=1e-8)
    assert traj.status == "finished"
    assert traj.has_event(EventKind.HORIZON_REACHED)
    assert not traj.terminated
    assert np.all(np.diff(traj.times) > 0)


def test_dense_output_resampling():
    traj = integrate(decay, [1.0], 2.0)
    times = np.linspace(0.0, 2.0, 17)
    states, clock = traj.resample(times)
    assert clock is None
    assert_allclose(states[:, 0], np.exp(-times), rtol=1e-7)


def test_zero_crossing_event_is_located():
    traj = integrate(descend, [1.0], 5.0, (EventSpec.xi_zero(),))
    event = traj.event(EventKind.XI_ZERO)
    assert event is not None
    assert event.time == pytest.approx(1.0, abs=1e-10)
    assert traj.terminated
    assert traj.status == "event"
    assert traj.final_time == pytest.approx(1.0, abs=1e-10)


def test_norm_guard():
    traj = integrate(grow, [1.0], 10.0, (EventSpec.state_norm_exceeds(10.0),))
    assert traj.event(EventKind.STATE_NORM_EXCEEDS).time == pytest.approx(np.log(10.0), rel=1e-8)


def test_non_terminal_event_is_recorded():
    traj = integrate(decay, [1.0, 1.0, 1.0, 1.0, 0.5], 3.0, (EventSpec.y_norm_below(0.1),))
    event = traj.event(EventKind.Y_NORM_BELOW)
    assert event is not None
    assert event.time == pytest.approx(np.log(np.sqrt(1.5) / 0.1), rel=1e-8)
    assert traj.final_time == 3.0


def test_blow_up_ends_the_run():
    traj = integrate(square, [1.0], 2.0)
    assert traj.terminated
    assert traj.status == "blow_up"
    assert traj.final_time < 1.0 + 1e-6


def test_semigroup_property():
    direct = integrate(decay, [1.0, 2.0], 2.0, rtol=1e-10, atol=1e-12)
    half = integrate(decay, [1.0, 2.0], 1.0, rtol=1e-10, atol=1e-12)
    rest = integrate(decay, half.final_state, 2.0, rtol=1e-10, atol=1e-12, t0=1.0)
    assert_allclose(rest.final_state, direct.final_state, rtol=1e-9, atol=1e-11)


def test_continuation_matches_direct_run():
    first = integrate(decay, [1.0], 1.0)
    extended = continue_trajectory(first, 1.0)
    assert extended.final_time == pytest.approx(2.0)
    assert extended.final_state[0] == pytest.approx(np.exp(-2.0), rel=1e-8)
    assert np.all(np.diff(extended.times) > 0)
    assert sum(e.kind is EventKind.HORIZON_REACHED for e in extended.events) == 1
    assert extended.resample([0.5])[0][0, 0] == pytest.approx(np.exp(-0.5), rel=1e-7)


def test_continuation_refused_after_terminal_event():
    traj = integrate(descend, [1.0], 5.0, (EventSpec.xi_zero(),))
    again = continue_trajectory(traj, 1.0)
    assert again.final_time == traj.final_time
    assert again.warnings


def test_clocked_run_measures_horizon_in_s():
    state = PrimalState(r=1.0, xi=2.0, L=(0, 0, 0), R=(0, 0, 0))
    traj = integrate(equations.primal_field, state, 3.0, clock=0.0, chart=Chart.PRIMAL)
    assert traj.final_clock == pytest.approx(3.0, abs=1e-10)
    assert traj.final_time == pytest.approx(2.5, abs=1e-10)
    assert list(traj.to_frame().columns[:3]) == ["r", "s", "xi"]


def test_clock_requires_primal_chart():
    with pytest.raises(DomainError):
        integrate(decay, [1.0], 1.0, clock=0.0)


def test_trajectory_is_read_only():
    traj = integrate(decay, [1.0], 1.0)
    with pytest.raises(ValueError):
        traj.states[0, 0] = 3.0


def test_csv_export(tmp_path):
    state = PrimalState(r=1.0, xi=2.0, L=(0.1, 0.0, 0.0), R=(0.2, 0.3, 0.4))
    traj = integrate(equations.primal_field, state, 1.2, chart=Chart.PRIMAL)
    path = traj.to_csv(tmp_path / "traj.csv")
    header, first = open(path).read().splitlines()[:2]
    assert header == "r,xi,L1,L2,L3,R1,R2,R3,C,Z"
    assert first.split(",")[-2] == ""
    assert "e+00" in first


def test_conserved_log():
    state = PrimalState(r=1.0, xi=2.0, L=(0.1, 0.2, 0.2), R=(0.3, 0.4, 0.4))
    traj = integrate(equations.primal_field, state, 1.2, chart=Chart.PRIMAL)
    log = traj.conserved_log
    assert len(log) == len(traj.times)
    assert all(report.biaxial for report in log)
    assert log[0].xi_minus_trace == pytest.approx(1.5)
    assert log[-1].C == pytest.approx(log[0].C, abs=1e-9)
    assert log[-1].Z == pytest.approx(log[0].Z, abs=1e-9)
    off = integrate(equations.primal_field, PrimalState(r=1.0, xi=2.0, L=(0.1, 0.0, 0.0), R=(0.2, 0.3, 0.4)), 1.2,
                    chart=Chart.PRIMAL)
    assert off.conserved_log[0].C is None


def test_relative_residual_is_pointwise():
    state = PrimalState(r=1.0, xi=2.0, L=(0.1, 0.2, 0.2), R=(0.3, 0.4, 0.4))
    traj = integrate(equations.primal_field, state, 1.2, chart=Chart.PRIMAL)
    large = [1e4, 1e4, 0.0, 0.0, 0.0, 5e3, 5e3]
    small = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    synthetic = replace(traj, times=np.array([1.0, 2.0]), states=np.array([large, small]), clock=None)
    _, Z, _, _ = synthetic.conserved_table
    assert_allclose(Z, [0.0, -1.0])
    assert synthetic.conserved_drift("Z") < 1e-6
    assert synthetic.relative_residual("Z") == pytest.approx(1.0)
