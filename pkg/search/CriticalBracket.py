from dataclasses import dataclass

from classification.Classification import Classification
from dynamics.ShootParams import ShootParams


@dataclass(frozen=True)
class CriticalBracket:
    """
    Sub-arc [lo, hi] of t in [0, 1] on the slice alpha^2 + beta^2 = 1 - gamma^2 (t = 0 at beta = 0,
    t = 1 at alpha = 0) whose ends have f_sign +1 and -1.

    `history` lists every iterate; each is nested in the previous one. `resolved` is False when the
    search stopped on near-critical samples before reaching the requested width.
    """
    n: int
    gamma: float
    lo: float
    hi: float
    lo_class: Classification
    hi_class: Classification
    tol: float
    iterations: int
    history: tuple
    resolved: bool = True
    horizon: float = 60.0
    lam: float = 0.0

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return 0.5 * (self.lo + self.hi)

    def params_at(self, t):
        return ShootParams.on_arc(self.n, t, gamma=self.gamma, lam=self.lam)

    def midpoint_params(self):
        return self.params_at(self.midpoint)

    def to_dict(self):
        params = self.midpoint_params()
        return {
            "n": self.n,
            "gamma": self.gamma,
            "lambda": self.lam,
            "lo": self.lo,
            "hi": self.hi,
            "width": self.width,
            "tol": self.tol,
            "iterations": self.iterations,
            "resolved": self.resolved,
            "horizon": self.horizon,
            "lo_class": self.lo_class.to_dict(),
            "hi_class": self.hi_class.to_dict(),
            "midpoint": {"t": self.midpoint, "alpha": params.alpha, "beta": params.beta},
        }
