import json

import numpy as np
import pytest
import sympy as sp
from numpy.testing import assert_allclose, assert_array_equal

from centermanifold.center_manifold import (biaxial_expansion_check, biaxial_point_linearization, coefficients_json,
                                            defect_order, invariance_defect, lift, origin_linearization,
                                            reduced_field, reduced_flow, six_field, solve_center_poly)
from dynamics.exceptions import DomainError
from integrator.EventSpec import EventKind
from integrator.integrator import integrate


@pytest.fixture(scope="module")
def quadratic():
    return solve_center_poly(2)


@pytest.fixture(scope="module")
def quartic():
    return solve_center_poly(4)


def test_quadratic_coefficients_are_exact(quadratic):
    half = sp.Rational(1, 2)
    assert quadratic.coeffs == {(2, 0, 0): half, (0, 2, 0): -half, (0, 0, 2): -half, (0, 1, 1): sp.Integer(1)}
    assert quadratic.is_tangent()
    assert quadratic.is_swap_symmetric()


def test_cubic_terms_vanish():
    assert solve_center_poly(3).homogeneous_part(3) == {}


def test_quartic_keeps_symmetry(quartic, quadratic):
    assert quartic.is_tangent()
    assert quartic.is_swap_symmetric()
    assert quartic.homogeneous_part(2) == quadratic.coeffs
    assert quartic.homogeneous_part(4)


@pytest.mark.parametrize("degree", [1, 5])
def test_degree_range(degree):
    with pytest.raises(DomainError):
        solve_center_poly(degree)


def test_origin_spectrum():
    J, eigenvalues = origin_linearization()
    assert_allclose(eigenvalues, [-1, -1, -1, 0, 0, 0], atol=1e-14)
    assert_array_equal(J[:3, :3], -np.eye(3))
    assert_array_equal(J[3:, :], 0.0)


def test_biaxial_point_linearization():
    a = 0.3
    J = biaxial_point_linearization(a)
    expected = np.array([[-1, 0, 0, 0], [0, -1, a, 0], [0, 0, 0, 0], [-a, 0, 0, 0]])
    assert_allclose(J, expected, atol=1e-15)
    assert_allclose(J @ [0, 0, 0, 1], 0.0, atol=1e-15)
    assert_allclose(J @ [0, a, 1, 0], 0.0, atol=1e-15)


@pytest.mark.parametrize("degree", [2, 4])
def test_biaxial_expansion(degree, quadratic, quartic):
    report = biaxial_expansion_check(quadratic if degree == 2 else quartic)
    assert report["passed"], report["deviations"]
    assert report["degree"] == degree


@pytest.mark.parametrize("degree", [2, 4])
def test_invariance_defect_order(degree, quadratic, quartic):
    poly = quadratic if degree == 2 else quartic
    assert defect_order(poly) >= degree + 0.8


def test_graph_matches_components(quadratic):
    y = np.array([0.01, 0.02, 0.03])
    C = quadratic.graph(y)
    assert C[0] == pytest.approx(0.5 * 0.01 ** 2 - 0.5 * (0.02 - 0.03) ** 2, abs=1e-18)
    assert C[1] == pytest.approx(0.5 * 0.02 ** 2 - 0.5 * (0.03 - 0.01) ** 2, abs=1e-18)
    assert C[2] == pytest.approx(0.5 * 0.03 ** 2 - 0.5 * (0.01 - 0.02) ** 2, abs=1e-18)
    assert_allclose(quadratic.graph(np.vstack([y, y])), np.vstack([C, C]))
    assert lift(quadratic, y).shape == (1, 6)


def test_reduced_flow_keeps_origin(quadratic):
    traj = reduced_flow(quadratic, [0.0, 0.0, 0.0], 50.0)
    assert_array_equal(traj.final_state, 0.0)


def test_reduced_flow_near_biaxial_line(quadratic):
    traj = reduced_flow(quadratic, [0.02, 0.05, 0.05], 200.0)
    y = traj.states
    assert_allclose(y[:, 1], y[:, 2], atol=1e-12)
    assert np.all(np.diff(y[:, 1]) <= 1e-15)
    assert np.all(np.abs(y[:, 1] - 0.05) < 0.025)
    assert y[-1, 0] < 0.02


def test_reduced_flow_rejects_outside_ball(quadratic):
    with pytest.raises(DomainError):
        reduced_flow(quadratic, [0.1, 0.0, 0.0], 1.0)
    with pytest.raises(DomainError):
        reduced_flow(quadratic, [0.01, 0.0], 1.0)


@pytest.mark.parametrize("degree", [2, 4])
def test_reduced_field_is_exactly_swap_symmetric(degree, quadratic, quartic):
    field = reduced_field(quadratic if degree == 2 else quartic)
    v = field(np.array([0.013, 0.047, 0.047]))
    assert v[1] == v[2]
    w = field(np.array([0.013, 0.031, 0.047]))
    assert_allclose(field(np.array([0.013, 0.047, 0.031])), w[[0, 2, 1]], rtol=0, atol=0)


@pytest.mark.slow
def test_reduced_flow_algebraic_decay(quadratic):
    traj = reduced_flow(quadratic, [0.02, 0.06, 0.06], 2e4)
    assert not traj.has_event(EventKind.STATE_NORM_EXCEEDS)
    tail = traj.times >= 1e4
    product = traj.times[tail] * traj.states[tail, 0]
    assert np.ptp(product) / np.mean(product) < 0.05
    assert np.max(product) < 20.0


def test_graph_attracts_nearby_points(quadratic):
    y0 = np.array([0.02, 0.03, 0.04])
    offset = 1e-3 * np.array([1.0, -1.0, 1.0]) / np.sqrt(3.0)
    z0 = np.concatenate([quadratic.graph(y0) + offset, y0])
    traj = integrate(six_field, z0, 2.0)
    z = traj.final_state
    assert np.linalg.norm(z[:3] - quadratic.graph(z[3:])) <= 0.5 * 1e-3
    assert invariance_defect(quadratic, y0)[0] < 1e-4


def test_coefficients_json(quadratic, tmp_path):
    path = tmp_path / "center_poly.json"
    text = coefficients_json(quadratic, path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data == json.loads(text)
    assert data["coefficients"]["2,0,0"] == {"value": 0.5, "exact": "1/2"}
    assert data["coefficients"]["0,1,1"]["value"] == 1.0
    assert data["rigorous"] is True
