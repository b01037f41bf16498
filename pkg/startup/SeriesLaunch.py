from dataclasses import dataclass
from typing import Optional

import numpy as np

from dynamics.ShootParams import ShootParams
from dynamics.states import PrimalState


@dataclass(frozen=True)
class SeriesLaunch:
    """
    Series data at the launch radius epsilon.

    eta_slope holds the coefficients of the tilde-eta expansion (eigen coordinates) for triaxial
    launches; eta_linear holds the slopes of eta itself, for both kinds of launch, and eta_quadratic
    its r^2 coefficients when the launch carries them.
    """
    params: ShootParams
    epsilon: float
    eta_slope: Optional[np.ndarray]
    eta_linear: np.ndarray
    state_at_eps: PrimalState
    biaxial: bool
    eta_quadratic: Optional[np.ndarray] = None

    def state_array(self, reduced=False):
        y = self.state_at_eps.to_array()
        return y[[0, 1, 2, 4, 5]] if reduced else y
