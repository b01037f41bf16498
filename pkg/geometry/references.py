"""
Closed-form Ricci-flat references and their conversion to arclength profiles.

Each reference is a dict like the problem dicts of an evaluation run: the metric function, the
coordinate where the arclength grid starts, the orbit order n and the factor mapping its f^2 to
the frame X_i = u_i/2 used by the soliton equations (the Eguchi-Hanson display is written in the
frame dual to u_i).
"""
import numpy as np
from scipy.integrate import solve_ivp

from dynamics.exceptions import DomainError
from dynamics.validator import check_float, check_int, check_str
from geometry.MetricProfile import MetricProfile


def taub_bolt(r):
    """
    Returns:
        tuple: (g_rr, f1^2, f2^2 = f3^2) in the coordinate r > 2, bolt at r = 2
    """
    r = check_float("r", r)
    if r <= 2.0:
        raise DomainError(f"Taub-Bolt is defined for r > 2, got r = {r}.")
    quad = r * r - 2.5 * r + 1.0
    return (r * r - 1.0) / quad, 4.0 * quad / (r * r - 1.0), r * r - 1.0


def eguchi_hanson(r):
    r = check_float("r", r)
    if r <= 0.0:
        raise DomainError(f"Eguchi-Hanson is defined for r > 0, got r = {r}.")
    root = np.sqrt(1.0 + r ** 4)
    return r * r / root, r ** 4 / root, root


REFERENCES = {
    "taub_bolt": {"metric": taub_bolt, "start": 2.5, "n": 1, "frame_scale": 1.0},
    "eguchi_hanson": {"metric": eguchi_hanson, "start": 1.0, "n": 2, "frame_scale": 0.25},
}


def reference_profile(name, spacing=0.01, length=2.0, rtol=1e-13, atol=1e-13):
    """
    Arclength profile of a reference metric on a uniform grid r_arc in [0, length], r_arc = 0 at the
    reference's start coordinate. The coordinate is recovered by integrating d(coord)/d(r_arc) = g_rr^(-1/2).
    """
    name = check_str("name", name, list(REFERENCES))
    spacing = check_float("spacing", spacing, (0.0, float("inf")))
    length = check_float("length", length, (0.0, float("inf")))
    reference = REFERENCES[name]
    metric = reference["metric"]
    count = check_int("count", int(round(length / spacing)) + 1, [2, float("inf")])
    grid = np.linspace(0.0, length, count)

    def speed(_, rho):
        return [1.0 / np.sqrt(metric(float(rho[0]))[0])]

    solution = solve_ivp(speed, (0.0, length), [reference["start"]], method="DOP853", t_eval=grid,
                         rtol=rtol, atol=atol)
    if not solution.success:
        raise DomainError(f"arclength conversion of '{name}' failed: {solution.message}")
    values = np.array([metric(float(rho)) for rho in solution.y[0]])
    scale = reference["frame_scale"]
    f1 = np.sqrt(scale * values[:, 1])
    f2 = np.sqrt(scale * values[:, 2])
    return MetricProfile(r=grid, f1=f1, f2=f2, f3=f2.copy(), u_prime=np.zeros_like(grid), n=reference["n"], lam=0.0)
