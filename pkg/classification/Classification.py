from dataclasses import dataclass, field
from enum import Enum
import math
from typing import Optional


def _num(value):
    value = float(value)
    return None if math.isnan(value) else value


class Verdict(Enum):
    COMPLETE = "Complete"
    INCOMPLETE_XI_NEGATIVE = "IncompleteXiNegative"
    BLOW_UP = "BlowUp"
    UNDETERMINED = "Undetermined"


class Pattern(Enum):
    BIAXIAL23 = "Biaxial23"
    PAIR12 = "Pair12"
    PAIR13 = "Pair13"
    ALL_ZERO = "AllZero"
    NONE = "None"


@dataclass(frozen=True)
class AsymptoticPattern:
    pattern: Pattern
    y_limits: tuple
    score: float
    best_pair: Pattern
    decay_exponent: float


@dataclass(frozen=True)
class Classification:
    """
    Verdict on a trajectory. `time` is the event time for incomplete/blow-up verdicts and the reached
    horizon (in s) otherwise; `route` tells which completeness test succeeded.
    """
    verdict: Verdict
    time: Optional[float]
    y_limits: tuple = (float("nan"),) * 3
    x_limits: tuple = (float("nan"),) * 3
    xi_limit: float = float("nan")
    pattern: Pattern = Pattern.NONE
    pattern_score: float = float("nan")
    best_pair: Pattern = Pattern.NONE
    decay_exponent: float = float("nan")
    route: str = ""
    details: dict = field(default_factory=dict)

    @property
    def complete(self):
        return self.verdict is Verdict.COMPLETE

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "time": self.time,
            "y_limits": [_num(v) for v in self.y_limits],
            "x_limits": [_num(v) for v in self.x_limits],
            "xi_limit": _num(self.xi_limit),
            "pattern": self.pattern.value,
            "pattern_score": _num(self.pattern_score),
            "best_pair": self.best_pair.value,
            "decay_exponent": _num(self.decay_exponent),
            "route": self.route,
            "details": dict(self.details),
        }
