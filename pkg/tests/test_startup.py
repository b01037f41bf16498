import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from dynamics import equations
from dynamics.ShootParams import ShootParams
from dynamics.exceptions import DomainError
from dynamics.states import PrimalState
from integrator.EventSpec import Chart
from integrator.integrator import integrate
from startup.SingularLinearization import A_MATRIX, EIGENVALUES, P_INVERSE, P_MATRIX, build_linearization
from startup.series import (biaxial_slopes, characterize, launch, launch_biaxial, launch_triaxial, second_order_coeffs,
                            singular_constant)

TRIAXIAL = ShootParams(n=4, alpha=0.6, beta=0.64, gamma=0.48)


def test_eigen_decomposition():
    assert_allclose(P_MATRIX @ P_INVERSE, np.eye(7), atol=1e-15)
    assert_allclose(P_MATRIX @ np.diag(EIGENVALUES) @ P_INVERSE, A_MATRIX, atol=1e-15)


def test_linearization_directions():
    lin = build_linearization()
    assert list(lin.unit_directions) == [5, 6]
    assert lin.beta_direction == 6
    assert lin.alpha_direction == 5
    assert_allclose(lin.forcing, np.zeros(7))


def test_triaxial_launch_recovers_shooting_data():
    state = launch_triaxial(TRIAXIAL).state_at_eps
    assert_allclose(characterize(state), (0.6, 0.64, 0.48), atol=1e-6)


def test_triaxial_launch_is_swap_symmetric_at_gamma_zero():
    state = launch_triaxial(ShootParams(n=4, alpha=0.6, beta=0.8)).state_at_eps
    assert state.L[1] == state.L[2]
    assert state.R[1] == state.R[2]


def test_quadratic_term_vanishes_on_the_biaxial_slice():
    series = launch_triaxial(ShootParams(n=4, alpha=0.6, beta=0.8))
    assert_array_equal(series.eta_quadratic, 0.0)


def test_quadratic_term_is_antisymmetric():
    q = launch_triaxial(TRIAXIAL).eta_quadratic
    assert_allclose(q[[0, 1, 4]], 0.0, atol=1e-12)
    assert q[2] == pytest.approx(-q[3], abs=1e-12)
    assert q[5] == pytest.approx(-q[6], abs=1e-12)
    assert q[2] == pytest.approx(-0.004512, abs=1e-6)
    assert q[5] == pytest.approx(0.182688, abs=1e-6)
    assert_array_equal(launch_triaxial(TRIAXIAL, order=1).eta_quadratic, 0.0)


def test_quadratic_term_solves_second_order_equation():
    lin = build_linearization(0.0, TRIAXIAL.gamma)
    series = launch_triaxial(TRIAXIAL)
    G = singular_constant(TRIAXIAL.gamma)
    e1, e2 = series.eta_linear, series.eta_quadratic
    h = 1e-3
    forced = (equations.primal_field(G + h * e1) - equations.primal_field(G - h * e1)) / (2.0 * h)
    assert_allclose(2.0 * e2 - lin.A @ e2, forced, atol=1e-10)
    assert_allclose(second_order_coeffs(lin, e1), e2, atol=1e-14)


def test_biaxial_launch_agrees_with_triaxial_at_n4():
    params = ShootParams(n=4, alpha=0.6, beta=0.8)
    assert_allclose(launch_biaxial(params).eta_linear, launch_triaxial(params).eta_linear, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_biaxial_launch_recovers_shooting_data(n):
    params = ShootParams(n=n, alpha=0.6, beta=0.8)
    state = launch_biaxial(params).state_at_eps
    alpha, beta, gamma = characterize(state)
    assert alpha == pytest.approx(0.6, abs=1e-6)
    assert beta == pytest.approx(0.8, abs=1e-12)
    assert gamma == 0.0
    assert state.R[1] == pytest.approx(2.0 / n / 1e-4, rel=1e-6)


def test_biaxial_slopes_make_einstein_launch_ricci_flat():
    c0, c1, c2, c4, c5 = biaxial_slopes(3, 0.0, 1.0)
    assert c0 - c1 - 2 * c2 == pytest.approx(0.0, abs=1e-15)
    assert 2 * (2.0 / 3) * c4 + 2 * (c1 - c0) == pytest.approx(0.0, abs=1e-14)


def test_launch_dispatch():
    assert not launch(TRIAXIAL).biaxial
    assert launch(ShootParams(n=3, alpha=0.6, beta=0.8)).eta_slope is None


def test_launch_domain_errors():
    with pytest.raises(DomainError):
        launch_triaxial(ShootParams(n=3, alpha=0.6, beta=0.8))
    with pytest.raises(DomainError):
        launch_biaxial(TRIAXIAL)
    with pytest.raises(DomainError):
        launch(TRIAXIAL, epsilon=0.5)


def test_shoot_params_validation():
    with pytest.raises(DomainError):
        ShootParams(n=3, alpha=0.6, beta=0.8, gamma=0.01)
    with pytest.raises(DomainError):
        ShootParams(n=4, alpha=0.6, beta=0.7)
    with pytest.raises(DomainError):
        ShootParams(n=4, alpha=-0.6, beta=0.8)
    assert ShootParams(n=4, alpha=-0.6, beta=0.8, allow_negative_alpha=True).alpha == -0.6


def test_arc_endpoints():
    start, end = ShootParams.on_arc(3, 0.0), ShootParams.on_arc(3, 1.0)
    assert (start.alpha, start.beta) == (1.0, 0.0)
    assert (end.alpha, end.beta) == (0.0, 1.0)
    mid = ShootParams.on_arc(4, 0.5, gamma=0.6)
    assert mid.alpha == pytest.approx(mid.beta)
    assert mid.alpha ** 2 + mid.beta ** 2 == pytest.approx(0.64)


def test_shoot_params_round_trip():
    assert ShootParams.from_dict(TRIAXIAL.to_dict()).to_dict() == TRIAXIAL.to_dict()


def _state_at(epsilon, radius):
    series = launch_triaxial(TRIAXIAL, epsilon)
    traj = integrate(equations.primal_field, series.state_at_eps, radius, rtol=1e-12, atol=1e-14,
                     chart=Chart.PRIMAL)
    return traj.final_state


def test_characterization_after_integration():
    state = PrimalState.from_array(1e-3, _state_at(1e-4, 1e-3))
    assert_allclose(characterize(state), (0.6, 0.64, 0.48), atol=1e-3)


@pytest.mark.slow
def test_startup_converges_under_epsilon_halving():
    a, b, c = (_state_at(eps, 0.5) for eps in (8e-3, 4e-3, 2e-3))
    ratio = np.linalg.norm(a - b) / np.linalg.norm(b - c)
    assert 3.2 <= ratio <= 4.8


def test_perturbations_follow_their_eigenvalues():
    series = launch_triaxial(TRIAXIAL)
    y0 = series.state_at_eps.to_array()

    def run(y):
        traj = integrate(equations.primal_field, y, 0.05, rtol=1e-12, atol=1e-14, t0=series.epsilon,
                         chart=Chart.PRIMAL)
        return traj.final_state

    base = run(y0)
    damped = np.linalg.norm(run(y0 + 1e-6 * P_MATRIX[:, 0]) - base)
    grown = np.linalg.norm(run(y0 + 1e-6 * P_MATRIX[:, 5]) - base)
    assert EIGENVALUES[0] == -2.0 and EIGENVALUES[5] == 1.0
    assert grown >= 1e3 * damped
