"""
Center manifold of the origin of the compactified steady system (lambda = 0).

With x = (X1, X2, X3) and y = (Y1, Y2, Y3) the last six equations read
    x' = -x + Q(y) + x |x|^2,   y_i' = y_i (2 x_i - sum(x) + |x|^2),
so the x-directions are stable and the y-directions neutral. The manifold is the graph x = C(y) and
its Taylor coefficients follow from the invariance equation DC(y) y' = x' order by order.
"""
import json
from itertools import combinations_with_replacement

import numpy as np
import sympy as sp

from centermanifold.CenterPoly import CenterPoly, COMPONENT_ORDER, Y_SYMBOLS
from dynamics.exceptions import DomainError
from dynamics.logs import create_logger
from dynamics.validator import check_finite, check_float, check_int
from integrator.EventSpec import EventSpec
from integrator.integrator import integrate

logger = create_logger(__name__)

MIN_DEGREE, MAX_DEGREE = 2, 4
VALIDITY_RADIUS = 0.1
X_SYMBOLS = sp.symbols("x1 x2 x3")


def six_field_expressions(x=X_SYMBOLS, y=Y_SYMBOLS):
    q = sum(v ** 2 for v in x)
    trace = sum(x)
    dx = [y[i] ** 2 / 2 - (y[j] - y[k]) ** 2 / 2 - x[i] + x[i] * q for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1))]
    dy = [y[i] * (2 * x[i] - trace + q) for i in range(3)]
    return dx, dy


def six_field(z, lam=0.0):
    """Last six compact equations at lambda = 0 on z = (X1, X2, X3, Y1, Y2, Y3)."""
    X1, X2, X3, Y1, Y2, Y3 = z
    q = X1 * X1 + (X2 * X2 + X3 * X3)
    trace = X1 + (X2 + X3)
    return np.array([
        0.5 * Y1 * Y1 - 0.5 * (Y2 - Y3) ** 2 - X1 + X1 * q,
        0.5 * Y2 * Y2 - 0.5 * (Y1 - Y3) ** 2 - X2 + X2 * q,
        0.5 * Y3 * Y3 - 0.5 * (Y1 - Y2) ** 2 - X3 + X3 * q,
        Y1 * (2.0 * X1 - trace + q),
        Y2 * (2.0 * X2 - trace + q),
        Y3 * (2.0 * X3 - trace + q),
    ])


def _monomials(order):
    out = []
    for combo in combinations_with_replacement(range(3), order):
        out.append(tuple(combo.count(k) for k in range(3)))
    return sorted(out, reverse=True)


def _truncate(expr, degree):
    poly = sp.Poly(sp.expand(expr), *Y_SYMBOLS)
    return sum((c * sp.prod([s ** e for s, e in zip(Y_SYMBOLS, m)]) for m, c in poly.terms() if sum(m) <= degree),
               sp.Integer(0))


def solve_center_poly(degree=2):
    """
    Args:
        degree: truncation degree, 2 to 4; degree 4 is a formal expansion beyond the proven regularity

    Returns:
        CenterPoly with exact rational coefficients
    """
    degree = check_int("degree", degree, [MIN_DEGREE, MAX_DEGREE])
    if degree > 3:
        logger.warning(f"Degree {degree} coefficients are formal: the manifold is only known to be C^3.")
    coeffs = {}
    for order in range(2, degree + 1):
        monomials = _monomials(order)
        unknowns = sp.symbols(f"c0:{len(monomials)}")
        trial = CenterPoly(degree=order, coeffs={**coeffs, **dict(zip(monomials, unknowns))})
        x = [trial.component(i) for i in range(3)]
        dx, dy = six_field_expressions(x, Y_SYMBOLS)
        # invariance of the first component; the others are its cyclic copies
        defect = dx[0] - sum(sp.diff(x[0], Y_SYMBOLS[k]) * dy[k] for k in range(3))
        poly = sp.Poly(_truncate(defect, order), *Y_SYMBOLS)
        equations = [poly.nth(*m) for m in monomials]
        solution = sp.linsolve(equations, unknowns)
        if not solution:
            raise DomainError(f"no center-manifold coefficients at order {order}.")
        values = next(iter(solution))
        for m, v in zip(monomials, values):
            if v != 0:
                coeffs[m] = sp.nsimplify(v)
        logger.debug(f"Order {order}: {sum(1 for m in monomials if m in coeffs)} non-zero coefficients.")
    return CenterPoly(degree=degree, coeffs=coeffs)


SWAP = [0, 2, 1]


def reduced_field(poly: CenterPoly):
    """y' on the graph, evaluated so that y2 = y3 stays exactly invariant."""
    def field(y, lam=0.0):
        y = np.asarray(y, dtype=float)
        c = 0.5 * (poly.graph(y) + poly.graph(y[SWAP])[SWAP])
        q = c[0] * c[0] + (c[1] * c[1] + c[2] * c[2])
        trace = c[0] + (c[1] + c[2])
        return y * (2.0 * c - trace + q)
    return field


def reduced_flow(poly: CenterPoly, y0, horizon, radius=VALIDITY_RADIUS, rtol=1e-10, atol=1e-14):
    """
    Integrates y_i' = y_i (2 C_i - sum(C) + |C|^2) on the graph x = C(y). Leaving the ball of
    `radius` ends the run with a StateNormExceeds event.
    """
    y0 = check_finite("y0", y0)
    if y0.shape != (3,):
        raise DomainError(f"'y0' should have 3 components, got {y0.shape}.")
    radius = check_float("radius", radius, (0.0, float("inf")))
    if np.linalg.norm(y0) >= radius:
        raise DomainError(f"'y0' should lie inside the validity ball of radius {radius}.")
    return integrate(reduced_field(poly), y0, horizon, (EventSpec.state_norm_exceeds(radius),), rtol, atol)


def lift(poly: CenterPoly, y):
    """Points (C(y), y) of the six-dimensional system."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return np.hstack([poly.graph(y), y])


def invariance_defect(poly: CenterPoly, y):
    """
    Stable-direction defect x' - DC(y) y' of the graph at the points y of shape (3,) or (N, 3).
    For a degree-d polynomial it is O(|y|^(d+1)).
    """
    y = np.atleast_2d(np.asarray(y, dtype=float))
    out = np.empty(y.shape[0])
    for idx, point in enumerate(y):
        z = np.concatenate([poly.graph(point), point])
        dz = six_field(z)
        out[idx] = np.linalg.norm(dz[:3] - poly.jacobian(point) @ dz[3:])
    return out


def defect_order(poly: CenterPoly, direction=(0.3, 0.5, 0.8), radii=(0.02, 0.01)):
    """Empirical order log(d1 / d2) / log(r1 / r2) of the invariance defect along a ray."""
    direction = check_finite("direction", direction)
    direction = direction / np.linalg.norm(direction)
    d = invariance_defect(poly, np.outer(radii, direction))
    return float(np.log(d[0] / d[1]) / np.log(radii[0] / radii[1]))


def origin_linearization():
    """Jacobian of the six-dimensional field at the origin and its eigenvalues."""
    dx, dy = six_field_expressions()
    variables = sp.Matrix(list(X_SYMBOLS) + list(Y_SYMBOLS))
    J = sp.Matrix(dx + dy).jacobian(variables).subs({v: 0 for v in variables})
    eigenvalues = sorted((complex(k).real for k, mult in J.eigenvals().items() for _ in range(mult)))
    return np.array(J, dtype=float), np.array(eigenvalues)


def biaxial_point_linearization(a):
    """
    Jacobian of the biaxial compact field in (X1, X2, Y1, Y2) at the equilibrium (0, 0, 0, a).

    The zero eigenvalue along Y1 is the one whose nonlinear terms make Y1 decay like 1/s.
    """
    a = check_float("a", a)
    X1, X2, Y1, Y2 = sp.symbols("X1 X2 Y1 Y2")
    q = X1 ** 2 + 2 * X2 ** 2
    field = sp.Matrix([
        Y1 ** 2 / 2 - X1 + X1 * q,
        Y1 * Y2 - Y1 ** 2 / 2 - X2 + X2 * q,
        Y1 * (X1 - 2 * X2 + q),
        Y2 * (-X1 + q),
    ])
    J = field.jacobian(sp.Matrix([X1, X2, Y1, Y2])).subs({X1: 0, X2: 0, Y1: 0, Y2: a})
    return np.array(J, dtype=float)


def biaxial_expansion_check(poly: CenterPoly):
    """
    Restricts the graph to the biaxial slice y = (yi, yj, yj) and compares the quadratic parts with
    Ci = yi^2 / 2 and Cj = yi yj - yi^2 / 2.

    Returns:
        dict with the deviations (exact zeros when the coefficients match) and a `passed` flag
    """
    yi, yj = sp.symbols("yi yj")
    ci = sp.expand(poly.expression((yi, yj, yj)))
    cj = sp.expand(poly.expression((yj, yj, yi)))
    ci_dev = _quadratic(ci, yi, yj) - sp.Poly(yi ** 2 / 2, yi, yj)
    cj_dev = _quadratic(cj, yi, yj) - sp.Poly(yi * yj - yi ** 2 / 2, yi, yj)
    limit = sp.limit(poly.expression((yi, 0, 0)) / yi ** 2, yi, 0)
    on_line = sp.expand(poly.expression((yj, yj, 0)))
    deviations = {
        "ci_quadratic": max([abs(float(c)) for c in ci_dev.coeffs()] + [0.0]),
        "cj_quadratic": max([abs(float(c)) for c in cj_dev.coeffs()] + [0.0]),
        "ci_over_yi2_limit": abs(float(limit) - 0.5),
        "equilibrium_line": max([abs(float(c)) for c in sp.Poly(on_line, yj).coeffs()] + [0.0]) if on_line != 0 else 0.0,
    }
    return {
        "degree": poly.degree,
        "ci_on_slice": str(ci),
        "cj_on_slice": str(cj),
        "deviations": deviations,
        "passed": all(v == 0.0 for v in deviations.values()),
    }


def _quadratic(expr, yi, yj):
    poly = sp.Poly(sp.expand(expr), yi, yj)
    return sp.Poly(sum((c * yi ** m[0] * yj ** m[1] for m, c in poly.terms() if sum(m) == 2), sp.Integer(0)), yi, yj)


def coefficients_json(poly: CenterPoly, path=None):
    text = json.dumps(poly.to_json_dict(), indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    return text


__all__ = ["COMPONENT_ORDER", "solve_center_poly", "six_field", "reduced_flow", "lift", "invariance_defect",
           "defect_order", "origin_linearization", "biaxial_point_linearization", "biaxial_expansion_check",
           "coefficients_json"]
