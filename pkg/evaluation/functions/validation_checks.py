# -*- coding: utf-8 -*-

"""validation_checks.py: collection of validation measurements

Every check :code:`check_func()` takes no argument and returns a
:code:`(value, details)` pair, where :code:`value` is a float compared
against the bounds of its problem entry in :code:`Evaluator.checks` and
:code:`details` is a JSON-ready dict written to the validation report.

Function list:
- Taub-Bolt residual, taub_bolt_residual
- Eguchi-Hanson residual, eguchi_hanson_residual
- Residual grid-halving ratio, residual_convergence
- Biaxial conserved quantity drift, biaxial_conservation
- Einstein branch residual, einstein_residual
- Quadratic center-manifold coefficients, center_quadratic
- Biaxial center-manifold expansion, center_biaxial_expansion
"""

import numpy as np

from centermanifold.center_manifold import biaxial_expansion_check, solve_center_poly
from dynamics import equations
from dynamics.ShootParams import ShootParams
from geometry.profiles import soliton_residual
from geometry.references import reference_profile
from integrator.EventSpec import Chart, EventSpec
from integrator.integrator import integrate
from search.Shooter import Shooter

QUADRATIC_COEFFICIENTS = {(2, 0, 0): 0.5, (0, 2, 0): -0.5, (0, 0, 2): -0.5, (0, 1, 1): 1.0}


def taub_bolt_residual():
    value = soliton_residual(reference_profile("taub_bolt"))
    return value, {"reference": "taub_bolt", "residual": value}


def eguchi_hanson_residual():
    value = soliton_residual(reference_profile("eguchi_hanson"))
    return value, {"reference": "eguchi_hanson", "residual": value}


def residual_convergence(name="eguchi_hanson", coarse=0.04):
    coarse_value = soliton_residual(reference_profile(name, spacing=coarse))
    fine_value = soliton_residual(reference_profile(name, spacing=coarse / 2))
    ratio = coarse_value / fine_value
    return ratio, {"reference": name, "coarse": coarse_value, "fine": fine_value}


def _compact_rhs(y, lam=0.0):
    return equations.rhs_biaxial_compact(y, lam)


def biaxial_conservation(n=3, alpha=0.6, beta=0.8, horizon=50.0):
    shot = Shooter().shoot(ShootParams(n=n, alpha=alpha, beta=beta), horizon=1.0)
    start = equations.primal_array_to_compact(shot.startup.final_state)
    traj = integrate(_compact_rhs, start, horizon, (EventSpec.state_norm_exceeds(1e6),), t0=0.0,
                     chart=Chart.COMPACT)
    drift = traj.conserved_drift("C")
    return drift, {"n": n, "alpha": alpha, "beta": beta, "s_end": traj.final_time, "status": traj.status}


def einstein_residual(n=4, horizon=60.0):
    shot = Shooter().shoot(ShootParams(n=n, alpha=0.0, beta=1.0), horizon=horizon)
    value = max(shot.startup.relative_residual("Z"), shot.main.relative_residual("Z"))
    return value, {"n": n, "r_end": shot.main.final_time,
                   "events": [e.kind.value for e in shot.main.events]}


def center_quadratic():
    poly = solve_center_poly(2)
    coefficients = {",".join(map(str, e)): float(poly.coefficient(e)) for e in QUADRATIC_COEFFICIENTS}
    value = max(abs(float(poly.coefficient(e)) - v) for e, v in QUADRATIC_COEFFICIENTS.items())
    extra = [e for e in poly.coeffs if e not in QUADRATIC_COEFFICIENTS]
    value = max([value] + [abs(float(poly.coefficient(e))) for e in extra])
    return value, {"coefficients": coefficients, "swap_symmetric": poly.is_swap_symmetric()}


def center_biaxial_expansion(degree=2):
    report = biaxial_expansion_check(solve_center_poly(degree))
    return max(report["deviations"].values()), report
