from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd


@dataclass(frozen=True, eq=False)
class MetricProfile:
    """Samples of dr^2 + f1^2 w1^2 + f2^2 w2^2 + f3^2 w3^2 together with the potential derivative u'."""
    r: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    u_prime: np.ndarray
    n: Optional[int] = None
    lam: float = 0.0

    @property
    def f(self):
        return np.vstack([self.f1, self.f2, self.f3])

    def __len__(self):
        return len(self.r)

    def to_frame(self):
        return pd.DataFrame({"r_arc": self.r, "f1": self.f1, "f2": self.f2, "f3": self.f3, "u_prime": self.u_prime})

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format="%.17e", na_rep="")
        return path
