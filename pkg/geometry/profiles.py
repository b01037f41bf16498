"""
Metric reconstruction from first-change variables, the fourth-order residual of the second-order
soliton equations, and leading-order smoothness checks at the bolt.
"""
import numpy as np
from scipy.integrate import cumulative_trapezoid

from dynamics import equations
from dynamics.exceptions import ReconstructionError
from dynamics.states import PrimalState
from dynamics.validator import check_float, check_int
from geometry.MetricProfile import MetricProfile
from integrator.EventSpec import Chart

MIN_RESIDUAL_SAMPLES = 5
UNIFORM_TOL = 1e-6


def metric_from_arrays(R):
    """f_i = (R_j R_k)^(-1/2), the inverse of R_i = f_i/(f_j f_k), for arrays of shape (..., 3)."""
    R = np.asarray(R, dtype=float)
    if np.any(~(R > 0)):
        raise ReconstructionError("metric reconstruction needs R_i > 0 at every sample.")
    R1, R2, R3 = R[..., 0], R[..., 1], R[..., 2]
    return np.stack([1.0 / np.sqrt(R2 * R3), 1.0 / np.sqrt(R1 * R3), 1.0 / np.sqrt(R1 * R2)], axis=-1)


def metric_from_state(state: PrimalState):
    return tuple(float(v) for v in metric_from_arrays(state.R))


def r_from_metric(f):
    f = np.asarray(f, dtype=float)
    f1, f2, f3 = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([f1 / (f2 * f3), f2 / (f1 * f3), f3 / (f1 * f2)], axis=-1)


def profile_from_primal(r, y, n=None, lam=0.0):
    y = equations.as_seven(y)
    f = metric_from_arrays(y[:, 4:7])
    u_prime = np.sum(y[:, 1:4], axis=1) - y[:, 0]
    return MetricProfile(r=np.asarray(r, dtype=float), f1=f[:, 0], f2=f[:, 1], f3=f[:, 2], u_prime=u_prime,
                         n=n, lam=lam)


def reconstruct_profile(traj, radii=None, r_origin=0.0):
    """
    Args:
        traj: Trajectory in either chart; compact runs recover r by integrating dr/ds = Lcal from `r_origin`
        radii: optional radii to resample a primal trajectory on (e.g. a uniform grid)

    Returns:
        MetricProfile
    """
    n = traj.params.n if traj.params is not None else None
    if radii is not None:
        if traj.chart is not Chart.PRIMAL:
            raise ReconstructionError("resampling by radius needs a primal-chart trajectory.")
        y, _ = traj.resample(radii)
        return profile_from_primal(radii, y, n, traj.lam)
    y = traj.primal_view()
    if traj.chart is Chart.COMPACT:
        r = r_origin + cumulative_trapezoid(traj.states[:, 0], traj.times, initial=0.0)
    else:
        r = traj.times
    return profile_from_primal(r, y, n, traj.lam)


def uniform_radii(start, stop, count):
    count = check_int("count", count, [MIN_RESIDUAL_SAMPLES, float("inf")])
    return np.linspace(start, stop, count)


def _spacing(r):
    if len(r) < MIN_RESIDUAL_SAMPLES:
        raise ReconstructionError(f"residual needs at least {MIN_RESIDUAL_SAMPLES} samples, got {len(r)}.")
    steps = np.diff(r)
    h = steps.mean()
    if not h > 0 or np.max(np.abs(steps - h)) > UNIFORM_TOL * h:
        raise ReconstructionError("residual needs a uniform grid in r_arc.")
    return h


def _first(v, h):
    return (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * h)


def _second(v, h):
    return (-v[4:] + 16.0 * v[3:-1] - 30.0 * v[2:-2] + 16.0 * v[1:-3] - v[:-4]) / (12.0 * h * h)


def soliton_residuals(profile: MetricProfile, lam=0.0):
    """
    Residuals of the four second-order equations at the interior samples (two points dropped at each end).

    Returns:
        np.ndarray: shape (4, len(profile) - 4); row 0 is the dr dr component, rows 1..3 the w_i w_i ones
    """
    lam = check_float("lambda", lam)
    h = _spacing(profile.r)
    f = profile.f
    fc = f[:, 2:-2]
    d1 = np.array([_first(v, h) for v in f])
    d2 = np.array([_second(v, h) for v in f])
    up = profile.u_prime[2:-2]
    upp = _first(profile.u_prime, h)
    ratio = d1 / fc
    volume_sq = np.prod(fc, axis=0) ** 2
    rows = [-np.sum(d2 / fc, axis=0) + upp - lam]
    for i, (j, k) in enumerate(((1, 2), (0, 2), (0, 1))):
        curvature = (fc[i] ** 4 - (fc[j] ** 2 - fc[k] ** 2) ** 2) / (2.0 * volume_sq)
        rows.append(-d2[i] / fc[i] + ratio[i] * (up - ratio[j] - ratio[k]) + curvature - lam)
    return np.array(rows)


def soliton_residual(profile: MetricProfile, lam=0.0):
    return float(np.max(np.abs(soliton_residuals(profile, lam))))


def smoothness_check(profile: MetricProfile, n, tol=1e-3, small_r=0.05, anisotropy_cap=1e3):
    """
    Leading-order closing conditions at the bolt, extrapolated from the two smallest samples:
    f1^2/r^2 -> n^2/4, f2^2 + f3^2 -> a positive constant, (f2^2 - f3^2)/r^(4/n) bounded.

    Returns:
        dict: limits, per-condition verdicts and the overall `passed`
    """
    n = check_int("n", n, [1, float("inf")])
    order = np.argsort(profile.r)
    r = profile.r[order]
    if len(r) < 2 or r[1] > small_r or r[0] <= 0:
        raise ReconstructionError(f"smoothness check needs two samples with 0 < r <= {small_r}.")
    ra, rb = r[0], r[1]
    f1, f2, f3 = profile.f1[order], profile.f2[order], profile.f3[order]

    def richardson(qa, qb):
        return (qa * rb ** 2 - qb * ra ** 2) / (rb ** 2 - ra ** 2)

    q = f1 ** 2 / r ** 2
    f1_limit = richardson(q[0], q[1])
    expected = n * n / 4.0
    sums = f2 ** 2 + f3 ** 2
    sum_limit = richardson(sums[0], sums[1])
    small = r <= small_r
    anisotropy = np.abs(f2[small] ** 2 - f3[small] ** 2) / r[small] ** (4.0 / n)
    checks = {
        "f1_sq_over_r_sq": bool(abs(f1_limit - expected) <= tol * expected),
        "f2_sq_plus_f3_sq": bool(sum_limit > 0),
        "anisotropy_bounded": bool(np.max(anisotropy) < anisotropy_cap),
    }
    return {
        "n": n,
        "f1_sq_over_r_sq_limit": float(f1_limit),
        "f1_sq_over_r_sq_expected": expected,
        "f2_sq_plus_f3_sq_limit": float(sum_limit),
        "anisotropy_max": float(np.max(anisotropy)),
        "checks": checks,
        "passed": all(checks.values()),
    }
