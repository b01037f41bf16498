"""
Frobenius launches from the singular orbit r = 0.

The n = 4 triaxial launch uses the eigen decomposition of the linearised system; the biaxial launch
for general n solves the corresponding reduced first-order system directly. Triaxial launches carry
the r^2 term as well: it is fully determined since 2 is not an eigenvalue of A, and it vanishes at
gamma = 0, where the biaxial first-order launch is already exact to O(r^3).
"""
import numpy as np

from dynamics import equations
from dynamics.ShootParams import ShootParams
from dynamics.exceptions import DomainError
from dynamics.logs import create_logger
from dynamics.states import PrimalState
from dynamics.validator import check_float, check_int
from startup.SeriesLaunch import SeriesLaunch
from startup.SingularLinearization import SingularLinearization, build_linearization

logger = create_logger(__name__)

ALPHA_FUNCTIONAL = np.array([1.0, -1.0, -1.0, -1.0, 0.0, 0.0, 0.0])
MAX_EPSILON = 0.01


def first_order_coeffs(lin: SingularLinearization, alpha, beta):
    """
    Coefficients c of the expansion tilde-eta = c r + O(r^2).

    Args:
        lin: linearisation for the launch's (lambda, gamma)
        alpha: target value of lim (xi - L1 - L2 - L3)/r
        beta: target value of lim R1/r

    Returns:
        np.ndarray: 7 eigen coordinates; determined directions solve (1 - d_i) c_i = (P^-1 K)_i,
        the beta direction carries beta and the alpha direction is fixed by a linear solve.
    """
    alpha = check_float("alpha", alpha)
    beta = check_float("beta", beta)
    eig = lin.eigenvalues
    forcing = lin.forcing
    c = np.zeros(7)
    determined = eig != 1.0
    c[determined] = forcing[determined] / (1.0 - eig[determined])
    b, a = lin.beta_direction, lin.alpha_direction
    c[b] = beta / lin.P[4, b]
    weights = ALPHA_FUNCTIONAL @ lin.P
    others = np.arange(7) != a
    c[a] = (alpha - weights[others] @ c[others]) / weights[a]
    return c


def singular_constant(gamma):
    """r^0 part of the triaxial singular solution, (0, 0, gamma, -gamma, 0, gamma, -gamma)."""
    return np.array([0.0, 0.0, gamma, -gamma, 0.0, gamma, -gamma])


def second_order_coeffs(lin: SingularLinearization, slope):
    """
    Coefficients e2 of the r^2 term of eta, solving (2 - A) e2 = DF(G) e1 for the first-order slopes e1
    and the constant part G of the singular solution. F is quadratic, so DF(G) e1 is the exact
    central difference (F(G + e1) - F(G - e1)) / 2.
    """
    G = singular_constant(lin.gamma)
    forced = 0.5 * (equations.primal_field(G + slope, lin.lam) - equations.primal_field(G - slope, lin.lam))
    return np.linalg.solve(2.0 * np.eye(7) - lin.A, forced)


def _check_epsilon(epsilon):
    return check_float("epsilon", epsilon, (0.0, MAX_EPSILON + 1e-15))


def launch_triaxial(params: ShootParams, epsilon=1e-4, order=2):
    if params.n != 4:
        raise DomainError(f"triaxial launches exist only for n = 4, got n = {params.n}.")
    epsilon = _check_epsilon(epsilon)
    order = check_int("order", order, [1, 2])
    lin = build_linearization(params.lam, params.gamma)
    c = first_order_coeffs(lin, params.alpha, params.beta)
    slope = lin.P @ c
    # the slopes are invariant under the (2 3) swap; make it exact
    slope[2] = slope[3] = 0.5 * (slope[2] + slope[3])
    slope[5] = slope[6] = 0.5 * (slope[5] + slope[6])
    quadratic = second_order_coeffs(lin, slope) if order == 2 else np.zeros(7)
    eta = slope * epsilon + quadratic * epsilon ** 2
    g, inv = params.gamma, 1.0 / epsilon
    state = PrimalState(r=epsilon, xi=inv + eta[0],
                        L=(inv + eta[1], g + eta[2], -g + eta[3]),
                        R=(eta[4], 0.5 * inv + g + eta[5], 0.5 * inv - g + eta[6]))
    logger.debug(f"Triaxial launch at epsilon={epsilon}: {params.to_dict()}")
    return SeriesLaunch(params=params, epsilon=epsilon, eta_slope=c, eta_linear=slope,
                        state_at_eps=state, biaxial=params.gamma == 0.0, eta_quadratic=quadratic)


def biaxial_slopes(n, alpha, beta, lam=0.0):
    """Slopes (c0, c1, c2, c4, c5) of xi, L1, L2 = L3, R1, R2 = R3 beyond their singular parts."""
    a = 2.0 / n
    system = np.array([
        [1.0, 2.0, 0.0, 0.0],
        [1.0, -1.0, -2.0, 0.0],
        [0.0, 0.0, 2.0, 0.0],
        [0.0, a, 0.0, 2.0],
    ])
    rhs = np.array([-lam, alpha, a * beta - lam, 0.0])
    c0, c1, c2, c5 = np.linalg.solve(system, rhs)
    return np.array([c0, c1, c2, beta, c5])


def launch_biaxial(params: ShootParams, epsilon=1e-4):
    if not params.biaxial:
        raise DomainError(f"biaxial launches require gamma = 0, got gamma = {params.gamma}.")
    epsilon = _check_epsilon(epsilon)
    c0, c1, c2, c4, c5 = biaxial_slopes(params.n, params.alpha, params.beta, params.lam)
    inv = 1.0 / epsilon
    R2 = 2.0 / params.n * inv + c5 * epsilon
    state = PrimalState(r=epsilon, xi=inv + c0 * epsilon,
                        L=(inv + c1 * epsilon, c2 * epsilon, c2 * epsilon),
                        R=(c4 * epsilon, R2, R2))
    return SeriesLaunch(params=params, epsilon=epsilon, eta_slope=None,
                        eta_linear=np.array([c0, c1, c2, c2, c4, c5, c5]), state_at_eps=state, biaxial=True)


def launch(params: ShootParams, epsilon=1e-4, order=2):
    """Triaxial launch for n = 4 (with its r^2 term when order = 2), biaxial otherwise."""
    if params.n == 4:
        return launch_triaxial(params, epsilon, order)
    return launch_biaxial(params, epsilon)


def characterize(state: PrimalState):
    """Recovers (alpha, beta, gamma) = ((xi - sum L)/r, R1/r, (L2 - L3)/2) near the singular orbit."""
    alpha = -state.u_prime / state.r
    beta = state.R[0] / state.r
    gamma = 0.5 * (state.L[1] - state.L[2])
    return alpha, beta, gamma
