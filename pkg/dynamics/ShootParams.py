from dataclasses import dataclass

import numpy as np

from dynamics.exceptions import DomainError
from dynamics.validator import check_bool, check_float, check_int, check_unit_sphere


@dataclass(frozen=True)
class ShootParams:
    """
    Shooting data for a launch from the singular orbit.

    (alpha, beta, gamma) lies on the unit sphere; gamma measures the triaxial asymmetry and is only
    admissible for n = 4. Soliton searches use alpha >= 0, beta >= 0.

    Examples:
        params = ShootParams(n=3, alpha=0.6, beta=0.8)
        params = ShootParams.on_arc(n=4, gamma=0.01, t=0.5)
    """
    n: int
    alpha: float
    beta: float
    gamma: float = 0.0
    lam: float = 0.0
    sphere_tol: float = 1e-12
    allow_negative_alpha: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n", check_int("n", self.n, [1, float("inf")]))
        object.__setattr__(self, "lam", check_float("lambda", self.lam))
        object.__setattr__(self, "alpha", check_float("alpha", self.alpha))
        object.__setattr__(self, "beta", check_float("beta", self.beta, [0.0, float("inf")]))
        object.__setattr__(self, "gamma", check_float("gamma", self.gamma))
        check_bool("allow_negative_alpha", self.allow_negative_alpha)
        if self.alpha < 0 and not self.allow_negative_alpha:
            raise DomainError("'alpha' should be non-negative for soliton searches.")
        if self.gamma != 0.0 and self.n != 4:
            raise DomainError(f"'gamma' must be 0 unless n = 4, got n = {self.n}, gamma = {self.gamma}.")
        check_unit_sphere("(alpha, beta, gamma)", self.direction, self.sphere_tol)

    @property
    def biaxial(self):
        return self.gamma == 0.0

    @property
    def direction(self):
        return np.array([self.alpha, self.beta, self.gamma])

    @classmethod
    def on_arc(cls, n, t, gamma=0.0, lam=0.0):
        """Point of the quarter arc alpha^2 + beta^2 = 1 - gamma^2; t = 0 is beta = 0, t = 1 is alpha = 0."""
        t = check_float("t", t, [0.0, 1.0])
        gamma = check_float("gamma", gamma, (-1.0, 1.0))
        rho = np.sqrt(1.0 - gamma ** 2)
        angle = 0.5 * np.pi * t
        alpha = 0.0 if t == 1.0 else rho * np.cos(angle)
        beta = 0.0 if t == 0.0 else rho * np.sin(angle)
        return cls(n=n, alpha=alpha, beta=beta, gamma=gamma, lam=lam, sphere_tol=1e-10)

    def to_dict(self):
        return {"n": self.n, "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "lambda": self.lam}

    @classmethod
    def from_dict(cls, data):
        return cls(n=data["n"], alpha=data["alpha"], beta=data["beta"], gamma=data.get("gamma", 0.0),
                   lam=data.get("lambda", 0.0), sphere_tol=1e-10)
