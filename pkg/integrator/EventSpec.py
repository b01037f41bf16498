from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from dynamics.exceptions import DomainError


class Chart(Enum):
    PRIMAL = "Primal"
    COMPACT = "Compact"


class EventKind(Enum):
    XI_ZERO = "XiZero"
    STATE_NORM_EXCEEDS = "StateNormExceeds"
    Y_NORM_BELOW = "YNormBelow"
    HORIZON_REACHED = "HorizonReached"
    BLOW_UP = "BlowUp"


TERMINATING_KINDS = (EventKind.XI_ZERO, EventKind.STATE_NORM_EXCEEDS, EventKind.BLOW_UP)


@dataclass(frozen=True)
class EventSpec:
    """
    A scalar event function g(state) watched for sign changes in `direction`
    (-1: from positive to non-positive, +1: from negative to non-negative).

    XiZero in the compact chart fires when xi = 1/Lcal drops to `value`, the edge of the region the
    chart resolves; in the primal chart it fires when xi crosses 0.
    """
    kind: EventKind
    value: float = 0.0
    direction: int = -1
    terminal: bool = True

    def __post_init__(self):
        if self.kind in (EventKind.STATE_NORM_EXCEEDS, EventKind.Y_NORM_BELOW) and not self.value > 0:
            raise DomainError(f"'{self.kind.value}' needs a positive bound, got {self.value}.")
        if self.direction not in (-1, 1):
            raise DomainError(f"'direction' should be -1 or 1, got {self.direction}.")

    @classmethod
    def xi_zero(cls, floor=1e-3):
        return cls(EventKind.XI_ZERO, value=floor)

    @classmethod
    def state_norm_exceeds(cls, bound=1e6):
        return cls(EventKind.STATE_NORM_EXCEEDS, value=bound)

    @classmethod
    def y_norm_below(cls, threshold):
        return cls(EventKind.Y_NORM_BELOW, value=threshold, terminal=False)

    def evaluate(self, y, chart: Optional[Chart]):
        y = np.asarray(y)
        if self.kind is EventKind.XI_ZERO:
            if chart is Chart.COMPACT:
                return 1.0 - self.value * y[0]
            return y[0]
        if self.kind is EventKind.STATE_NORM_EXCEEDS:
            return self.value - np.linalg.norm(y)
        if self.kind is EventKind.Y_NORM_BELOW:
            tail = y[4:7] if y.shape[0] == 7 else y[[3, 4, 4]]
            if chart is Chart.PRIMAL:
                return np.linalg.norm(tail) - self.value * y[0]
            return np.linalg.norm(tail) - self.value
        raise DomainError(f"'{self.kind.value}' has no event function.")

    def crossed(self, g_old, g_new):
        if self.direction < 0:
            return g_old > 0 >= g_new
        return g_old < 0 <= g_new


@dataclass(frozen=True, eq=False)
class Event:
    kind: EventKind
    time: float
    state: np.ndarray
    clock: Optional[float] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"kind": self.kind.value, "time": float(self.time),
                "clock": None if self.clock is None else float(self.clock),
                "state": [float(v) for v in self.state], "detail": dict(self.detail)}
