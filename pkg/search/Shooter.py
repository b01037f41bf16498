from dataclasses import dataclass, replace

import numpy as np

from dynamics import equations
from dynamics.ShootParams import ShootParams
from dynamics.logs import create_logger
from dynamics.validator import check_float, check_int, check_no_extra
from integrator.EventSpec import Chart, EventSpec
from integrator.Trajectory import Trajectory
from integrator.integrator import continue_trajectory, integrate
from startup.SeriesLaunch import SeriesLaunch
from startup.series import launch


@dataclass(frozen=True, eq=False)
class Shot:
    """
    One shooting run: the series launch, the startup leg from epsilon to the handoff radius and the
    main leg beyond it, integrated in r with the clock s = integral of xi dr starting at 0.
    """
    params: ShootParams
    launch: SeriesLaunch
    startup: Trajectory
    main: Trajectory

    @property
    def handoff_radius(self):
        return self.startup.final_time

    def resample_primal(self, radii):
        """7-component primal states at arbitrary radii in [epsilon, end of main leg]."""
        radii = np.asarray(radii, dtype=float)
        out = np.empty((radii.size, 7))
        early = radii <= self.handoff_radius
        if np.any(early):
            out[early] = equations.as_seven(self.startup.resample(radii[early])[0])
        if np.any(~early):
            out[~early] = equations.as_seven(self.main.resample(radii[~early])[0])
        return out


class Shooter:
    """
    Launches a trajectory from the singular orbit and integrates it in the primal chart.

    n = 4 runs use the full seven-equation system, other n the five-equation biaxial reduction.
    XiZero and the norm guard terminate a run. YNormBelow, |Y| dropping under `y_ball` (the validity
    radius of the center-manifold reduction), is recorded for the classifier.
    """

    def __init__(self, epsilon=1e-4, handoff_radius=0.05, rtol=1e-10, atol=1e-12, blow_up_bound=1e6,
                 y_ball=0.1, max_steps=500000, series_order=2, **kwargs):
        check_no_extra(self.__class__.__name__, kwargs)
        self.epsilon = check_float("epsilon", epsilon, (0.0, 0.01 + 1e-15))
        self.handoff_radius = check_float("handoff_radius", handoff_radius, (self.epsilon, float("inf")))
        self.rtol = check_float("rtol", rtol, (0.0, 1.0))
        self.atol = check_float("atol", atol, (0.0, float("inf")))
        self.blow_up_bound = check_float("blow_up_bound", blow_up_bound, (0.0, float("inf")))
        self.y_ball = check_float("y_ball", y_ball, (0.0, float("inf")))
        self.max_steps = check_int("max_steps", max_steps, [1, float("inf")])
        self.series_order = check_int("series_order", series_order, [1, 2])
        self.logger = create_logger(f"{self.__module__}.{self.__class__.__name__}")

    def tightened(self, factor=10.0):
        """Copy of this shooter with both tolerances divided by `factor`."""
        clone = Shooter(epsilon=self.epsilon, handoff_radius=self.handoff_radius, rtol=self.rtol / factor,
                        atol=self.atol / factor, blow_up_bound=self.blow_up_bound, y_ball=self.y_ball,
                        max_steps=self.max_steps, series_order=self.series_order)
        return clone

    def system(self, params: ShootParams):
        if params.n == 4:
            return equations.primal_field, False
        return equations.biaxial_primal_field, True

    def shoot(self, params: ShootParams, horizon=60.0):
        horizon = check_float("horizon", horizon, (0.0, float("inf")))
        series = launch(params, self.epsilon, self.series_order)
        rhs, reduced = self.system(params)
        guards = (EventSpec.xi_zero(), EventSpec.state_norm_exceeds(self.blow_up_bound))
        startup = integrate(rhs, series.state_array(reduced=reduced), self.handoff_radius, guards,
                            rtol=self.rtol, atol=self.atol, t0=series.epsilon, chart=Chart.PRIMAL,
                            params=params, lam=params.lam, max_steps=self.max_steps)
        if startup.terminated:
            self.logger.warning(f"Startup leg terminated before the handoff radius: {params.to_dict()}")
            main = startup
        else:
            main = integrate(rhs, startup.final_state, horizon, guards + (EventSpec.y_norm_below(self.y_ball),),
                             rtol=self.rtol, atol=self.atol, t0=startup.final_time, chart=Chart.PRIMAL,
                             params=params, lam=params.lam, clock=0.0, max_steps=self.max_steps)
        self.logger.info(f"Shot {params.to_dict()} to s={main.final_clock:.3f}, status: {main.status}")
        return Shot(params=params, launch=series, startup=startup, main=main)

    def extend(self, shot: Shot, extra_horizon):
        if shot.main is shot.startup:
            return shot
        return replace(shot, main=continue_trajectory(shot.main, extra_horizon))
