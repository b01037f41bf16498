"""
Adaptive Dormand-Prince 5(4) integration with dense output and event location.

Steps are taken one at a time through scipy's RK45 stepper so that step-size underflow and
non-finite states end the run with a BLOW_UP event instead of an exception.
"""
import numpy as np
from scipy.integrate import RK45
from scipy.optimize import brentq

from dynamics.exceptions import DomainError
from dynamics.logs import create_logger
from dynamics.states import CompactState, PrimalState
from dynamics.validator import check_finite, check_float, check_int
from integrator.EventSpec import Chart, Event, EventKind, EventSpec
from integrator.Trajectory import IntegrationSettings, Trajectory

logger = create_logger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
MAX_STEPS = 500000
EVENT_XTOL = 1e-12


def _initial(initial_state, t0, chart):
    if isinstance(initial_state, PrimalState):
        return initial_state.to_array(), initial_state.r if t0 is None else t0, chart or Chart.PRIMAL
    if isinstance(initial_state, CompactState):
        return initial_state.to_array(), initial_state.s if t0 is None else t0, chart or Chart.COMPACT
    y0 = check_finite("initial state", initial_state)
    return np.atleast_1d(y0).astype(float), 0.0 if t0 is None else t0, chart


def _field(rhs, lam, clocked):
    if clocked:
        def fun(t, y):
            with np.errstate(over="ignore", invalid="ignore"):
                return np.append(rhs(y[:-1], lam), y[0])
    else:
        def fun(t, y):
            with np.errstate(over="ignore", invalid="ignore"):
                return np.asarray(rhs(y, lam), dtype=float)
    return fun


def _locate(fn, t_old, t_new):
    try:
        return brentq(fn, t_old, t_new, xtol=EVENT_XTOL)
    except ValueError:
        # rounding put the end of the step exactly on the root
        return t_new


def _state(y, clocked):
    return y[:-1] if clocked else y


def _advance(settings: IntegrationSettings, chart, t0, y0, horizon):
    """Runs the stepper from (t0, y0) and returns (times, states, events, interpolants, status)."""
    clocked = settings.clocked
    fun = _field(settings.rhs, settings.lam, clocked)
    t_bound = settings.t_max if clocked else horizon
    specs = list(settings.specs)
    if clocked:
        specs.append(EventSpec(EventKind.HORIZON_REACHED, value=horizon))

    def g(spec, y):
        if spec.kind is EventKind.HORIZON_REACHED:
            return spec.value - y[-1]
        return spec.evaluate(_state(y, clocked), chart)

    times, states, events, interpolants = [t0], [y0], [], []
    if not t_bound > t0:
        return times, states, events, interpolants, "finished"
    solver = RK45(fun, t0, y0, t_bound, rtol=settings.rtol, atol=settings.atol)
    g_prev = [g(spec, y0) for spec in specs]
    status, stop = "running", None
    while solver.status == "running":
        if len(interpolants) >= settings.max_steps:
            status = "max_steps"
            logger.warning(f"Step budget of {settings.max_steps} exhausted at t={solver.t}.")
            break
        message = solver.step()
        if solver.status == "failed" or not np.all(np.isfinite(solver.y)):
            t_fail = solver.t if np.all(np.isfinite(solver.y)) else times[-1]
            y_fail = solver.y if np.all(np.isfinite(solver.y)) else states[-1]
            events.append(Event(EventKind.BLOW_UP, float(t_fail), _state(y_fail, clocked).copy(),
                                clock=float(y_fail[-1]) if clocked else None,
                                detail={"message": str(message)}))
            status = "blow_up"
            break
        t_old, t_new, y_new = solver.t_old, solver.t, solver.y.copy()
        dense = solver.dense_output()
        fired = []
        g_new = [g(spec, y_new) for spec in specs]
        for spec, old, new in zip(specs, g_prev, g_new):
            if spec.crossed(old, new):
                root = _locate(lambda tt: g(spec, dense(tt)), t_old, t_new)
                fired.append((root, spec))
        g_prev = g_new
        fired.sort(key=lambda item: item[0])
        stop = next((item for item in fired if item[1].terminal), None)
        for root, spec in fired:
            if stop is not None and root > stop[0]:
                continue
            y_root = dense(root)
            events.append(Event(spec.kind, float(root), _state(y_root, clocked).copy(),
                                clock=float(y_root[-1]) if clocked else None))
        if stop is not None:
            root = stop[0]
            if root > times[-1]:
                times.append(root)
                states.append(dense(root))
                interpolants.append(dense)
            status = "event"
            break
        times.append(t_new)
        states.append(y_new)
        interpolants.append(dense)
    if status == "running":
        status = "finished"
        events.append(Event(EventKind.HORIZON_REACHED, float(times[-1]), _state(states[-1], clocked).copy(),
                            clock=float(states[-1][-1]) if clocked else None))
    elif status == "event" and stop[1].kind is EventKind.HORIZON_REACHED:
        status = "finished"
    return times, states, events, interpolants, status


def _build(settings, chart, params, horizon, times, states, events, interpolants, status, warnings=()):
    states = np.array(states)
    clock = None
    if settings.clocked:
        clock, states = states[:, -1].copy(), states[:, :-1].copy()
    events = tuple(sorted(events, key=lambda e: e.time))
    return Trajectory(chart=chart, times=np.array(times), states=states, events=events, horizon=horizon,
                      settings=settings, params=params, clock=clock, interpolants=tuple(interpolants),
                      warnings=tuple(warnings), status=status)


def integrate(rhs, initial_state, horizon, events=(), rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, *, t0=None,
              chart=None, params=None, lam=0.0, clock=None, t_max=np.inf, max_steps=MAX_STEPS):
    """
    Integrates y' = rhs(y, lam) until `horizon` or the first terminal event.

    Args:
        rhs: callable (y, lam) -> dy, e.g. equations.primal_field
        initial_state: PrimalState, CompactState or array
        horizon: final time; for clocked runs the final value of s = integral of xi dr
        events: iterable of EventSpec
        rtol, atol: tolerances of the embedded error estimate
        t0: initial time (taken from the state object when omitted)
        chart: Chart of the state, None for systems outside the soliton charts
        params: ShootParams recorded on the trajectory
        lam: Einstein constant passed to rhs
        clock: initial value of s; enables the clock for primal runs
        t_max: bound on the time variable of clocked runs
        max_steps: step budget; exhausting it ends the run without a terminal event

    Returns:
        Trajectory
    """
    y0, t0, chart = _initial(initial_state, t0, chart)
    rtol = check_float("rtol", rtol, (0.0, 1.0))
    atol = check_float("atol", atol, (0.0, float("inf")))
    horizon = check_float("horizon", horizon)
    max_steps = check_int("max_steps", max_steps, [1, float("inf")])
    clocked = clock is not None
    if clocked and chart is not Chart.PRIMAL:
        raise DomainError("the s-clock is only defined for primal-chart runs.")
    settings = IntegrationSettings(rhs=rhs, lam=float(lam), specs=tuple(events), rtol=rtol, atol=atol,
                                   max_steps=max_steps, clocked=clocked, t_max=float(t_max))
    y_start = np.append(y0, float(clock)) if clocked else y0
    result = _advance(settings, chart, float(t0), y_start, horizon)
    return _build(settings, chart, params, horizon, *result)


def continue_trajectory(traj: Trajectory, extra_horizon):
    """
    Extends a trajectory that ended at its horizon by `extra_horizon` (in s for clocked runs).

    Trajectories ended by XiZero, a norm guard or blow-up are returned unchanged with a warning.
    """
    extra_horizon = check_float("extra_horizon", extra_horizon, (0.0, float("inf")))
    if traj.terminated:
        logger.warning("Refusing to continue a trajectory ended by a terminal event.")
        return traj.with_warning("continuation refused: trajectory already terminated")
    settings = traj.settings
    horizon = traj.final_clock + extra_horizon
    y0 = traj.states[-1]
    if settings.clocked:
        y0 = np.append(y0, traj.clock[-1])
    times, states, events, interpolants, status = _advance(settings, traj.chart, traj.final_time,
                                                           np.array(y0), horizon)
    old_states = traj.states if traj.clock is None else np.column_stack([traj.states, traj.clock])
    kept_events = [e for e in traj.events if e.kind is not EventKind.HORIZON_REACHED]
    return _build(settings, traj.chart, traj.params, horizon,
                  list(traj.times) + times[1:], list(old_states) + states[1:], kept_events + events,
                  list(traj.interpolants) + interpolants, status, traj.warnings)
