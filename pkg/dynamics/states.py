from dataclasses import dataclass
from typing import Optional

import numpy as np

from dynamics.validator import check_finite


@dataclass(frozen=True)
class PrimalState:
    """First-change variables at arclength r: xi, L_i = f_i'/f_i, R_i = f_i/(f_j f_k)."""
    r: float
    xi: float
    L: tuple
    R: tuple

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(float(v) for v in self.L))
        object.__setattr__(self, "R", tuple(float(v) for v in self.R))

    @property
    def u_prime(self):
        return sum(self.L) - self.xi

    def to_array(self):
        return np.array([self.xi, *self.L, *self.R])

    @classmethod
    def from_array(cls, r, values):
        values = check_finite("state", values)
        return cls(r=float(r), xi=float(values[0]), L=tuple(values[1:4]), R=tuple(values[4:7]))


@dataclass(frozen=True)
class CompactState:
    """Compactified variables at time s: Lcal = 1/xi, X_i = Lcal L_i, Y_i = Lcal R_i."""
    s: float
    Lcal: float
    X: tuple
    Y: tuple

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(float(v) for v in self.X))
        object.__setattr__(self, "Y", tuple(float(v) for v in self.Y))

    def to_array(self):
        return np.array([self.Lcal, *self.X, *self.Y])

    @classmethod
    def from_array(cls, s, values):
        values = check_finite("state", values)
        return cls(s=float(s), Lcal=float(values[0]), X=tuple(values[1:4]), Y=tuple(values[4:7]))


@dataclass(frozen=True)
class ConservedReport:
    """C is None when the state is not biaxial."""
    C: Optional[float]
    Z: float
    xi_minus_trace: float

    @property
    def biaxial(self):
        return self.C is not None
