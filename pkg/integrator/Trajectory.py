from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Optional

import numpy as np
import pandas as pd
from scipy.integrate import OdeSolution

from dynamics import equations
from dynamics.ShootParams import ShootParams
from dynamics.states import ConservedReport
from integrator.EventSpec import Chart, EventKind, TERMINATING_KINDS

PRIMAL_COLUMNS = ["xi", "L1", "L2", "L3", "R1", "R2", "R3"]
COMPACT_COLUMNS = ["Lcal", "X1", "X2", "X3", "Y1", "Y2", "Y3"]


@dataclass(frozen=True)
class IntegrationSettings:
    rhs: Callable
    lam: float
    specs: tuple
    rtol: float
    atol: float
    max_steps: int
    clocked: bool
    t_max: float


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Immutable record of one integration: strictly increasing sample times, the states at those
    times, the located events and the dense output of every accepted step.

    Clocked primal runs also carry s = integral of xi dr in `clock`; their horizon is measured in s.
    """
    chart: Optional[Chart]
    times: np.ndarray
    states: np.ndarray
    events: tuple
    horizon: float
    settings: IntegrationSettings
    params: Optional[ShootParams] = None
    clock: Optional[np.ndarray] = None
    interpolants: tuple = ()
    warnings: tuple = ()
    status: str = "finished"

    def __post_init__(self):
        for arr in (self.times, self.states) + (() if self.clock is None else (self.clock,)):
            arr.setflags(write=False)

    @property
    def lam(self):
        return self.settings.lam

    @property
    def dim(self):
        return self.states.shape[1]

    @property
    def terminated(self):
        return any(event.kind in TERMINATING_KINDS for event in self.events)

    @property
    def final_time(self):
        return float(self.times[-1])

    @property
    def final_state(self):
        return self.states[-1]

    @property
    def final_clock(self):
        return float(self.clock[-1]) if self.clock is not None else self.final_time

    def event(self, kind: EventKind):
        return next((e for e in self.events if e.kind is kind), None)

    def has_event(self, kind: EventKind):
        return self.event(kind) is not None

    @cached_property
    def dense(self):
        if not self.interpolants:
            return None
        return OdeSolution(np.asarray(self.times), list(self.interpolants))

    def resample(self, times):
        """States (and clock, if any) at arbitrary times inside the integrated range."""
        times = np.asarray(times, dtype=float)
        if self.dense is None:
            raise ValueError("trajectory has no dense output to resample.")
        values = np.atleast_2d(self.dense(times).T)
        if self.clock is not None:
            return values[:, :-1], values[:, -1]
        return values, None

    def primal_view(self):
        """Primal arrays of all samples (7 components); compact samples are converted."""
        y = equations.as_seven(self.states)
        if self.chart is Chart.COMPACT:
            return equations.compact_array_to_primal(y)
        return y

    def compact_view(self):
        """(times, clock-or-times, compact arrays) restricted to samples with xi > 0."""
        y = equations.as_seven(self.states)
        if self.chart is Chart.COMPACT:
            return self.times, self.times, y
        mask = y[:, 0] > 0
        clock = self.clock if self.clock is not None else self.times
        return self.times[mask], clock[mask], equations.primal_array_to_compact(y[mask])

    @cached_property
    def conserved_table(self):
        if self.chart is None:
            return None
        if self.chart is Chart.COMPACT:
            y = self.primal_view()
        else:
            y = equations.as_seven(self.states)
        return equations.conserved_arrays(y, self.lam) + (equations.conserved_scale(y),)

    @cached_property
    def conserved_log(self):
        if self.conserved_table is None:
            return ()
        C, Z, gap, _ = self.conserved_table
        return tuple(ConservedReport(C=None if np.isnan(c) else float(c), Z=float(z), xi_minus_trace=float(g))
                     for c, z, g in zip(C, Z, gap))

    def conserved_drift(self, quantity="C", start=None, stop=None):
        """Largest change of C or Z over [start, stop] (times, or clock when present), in units of the scale at start."""
        C, Z, _, scale = self.conserved_table
        values = C if quantity == "C" else Z
        axis = self.clock if self.clock is not None else self.times
        mask = np.ones(len(axis), dtype=bool)
        if start is not None:
            mask &= axis >= start
        if stop is not None:
            mask &= axis <= stop
        values, scale = values[mask], scale[mask]
        if values.size == 0 or np.any(np.isnan(values)):
            return float("nan")
        return float(np.max(np.abs(values - values[0]) / scale[0]))

    def relative_residual(self, quantity="Z"):
        """Largest |C| or |Z| relative to the size of its own terms at the same sample."""
        C, Z, _, scale = self.conserved_table
        values = C if quantity == "C" else Z
        if values.size == 0 or np.any(np.isnan(values)):
            return float("nan")
        return float(np.max(np.abs(values) / scale))

    def with_warning(self, warning):
        return replace(self, warnings=self.warnings + (warning,))

    def to_frame(self):
        y = self.states
        if self.chart is None:
            frame = pd.DataFrame(y, columns=[f"y{i}" for i in range(self.dim)])
            frame.insert(0, "t", self.times)
            return frame
        y = equations.as_seven(y)
        if self.chart is Chart.PRIMAL:
            frame = pd.DataFrame(y, columns=PRIMAL_COLUMNS)
            if self.clock is not None:
                frame.insert(0, "s", self.clock)
            frame.insert(0, "r", self.times)
        else:
            frame = pd.DataFrame(y, columns=COMPACT_COLUMNS)
            frame.insert(0, "s", self.times)
        C, Z, _, _ = self.conserved_table
        frame["C"], frame["Z"] = C, Z
        return frame

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.17e", na_rep="")
        return path

    def to_dict(self):
        return {
            "chart": None if self.chart is None else self.chart.value,
            "params": None if self.params is None else self.params.to_dict(),
            "events": [event.to_dict() for event in self.events],
            "horizon": float(self.horizon),
            "rtol": self.settings.rtol,
            "atol": self.settings.atol,
            "n_samples": int(len(self.times)),
            "final_time": self.final_time,
            "final_clock": self.final_clock,
            "terminated": self.terminated,
            "status": self.status,
            "warnings": list(self.warnings),
        }
