from dataclasses import dataclass

import numpy as np

from dynamics.validator import check_float

A_MATRIX = np.array([
    [0.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0, 0.5, 0.5, -0.5],
    [0.0, 0.0, 0.0, -1.0, 0.5, -0.5, 0.5],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, -0.5, 0.5, -0.5, 0.0, -1.0, 0.0],
    [0.0, -0.5, -0.5, 0.5, 0.0, 0.0, -1.0],
])

EIGENVALUES = np.array([-2.0, -2.0, -1.0, -1.0, 0.0, 1.0, 1.0])

P_MATRIX = np.array([
    [1.0, 1.0, 0.0, 0.0, 0.0, 8.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0, -4.0, 0.0],
    [0.5, -0.5, 0.0, 1.0, -1.0, 0.0, 0.25],
    [-0.5, 0.5, 0.0, 1.0, 1.0, 0.0, 0.25],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 1.0, 0.0, -1.0, 1.0, 0.0],
    [1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0],
])

P_INVERSE = np.array([
    [1 / 6, 1 / 3, 0.25, -0.25, 0.0, -0.25, 0.25],
    [1 / 6, 1 / 3, -0.25, 0.25, 0.0, 0.25, -0.25],
    [-0.25, -0.25, 0.0, 0.0, 0.0, 0.5, 0.5],
    [0.0, 0.0, 0.5, 0.5, -0.25, 0.0, 0.0],
    [0.0, 0.0, -0.25, 0.25, 0.0, -0.25, 0.25],
    [1 / 12, -1 / 12, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
])


@dataclass(frozen=True)
class SingularLinearization:
    """
    Linearisation eta' = (A eta + K)/r of the n = 4 first-change system at the singular orbit,
    written in the eigenbasis A = P D P^-1.
    """
    A: np.ndarray
    K: np.ndarray
    D: np.ndarray
    P: np.ndarray
    Pinv: np.ndarray
    lam: float
    gamma: float

    @property
    def eigenvalues(self):
        return np.diag(self.D).copy()

    @property
    def unit_directions(self):
        """Indices of the eigenvalue-1 directions of D."""
        return np.flatnonzero(self.eigenvalues == 1.0)

    @property
    def beta_direction(self):
        # the unit direction feeding R1
        units = self.unit_directions
        return int(units[np.argmax(np.abs(self.P[4, units]))])

    @property
    def alpha_direction(self):
        return int(next(i for i in self.unit_directions if i != self.beta_direction))

    @property
    def forcing(self):
        """K in eigen coordinates, P^-1 K."""
        return self.Pinv @ self.K


def build_linearization(lam=0.0, gamma=0.0):
    lam = check_float("lambda", lam)
    gamma = check_float("gamma", gamma)
    g2 = 2.0 * gamma ** 2
    K = np.array([-lam - g2, -lam - g2, -lam, -lam, 0.0, g2, g2])
    return SingularLinearization(A=A_MATRIX.copy(), K=K, D=np.diag(EIGENVALUES), P=P_MATRIX.copy(),
                                 Pinv=P_INVERSE.copy(), lam=lam, gamma=gamma)
