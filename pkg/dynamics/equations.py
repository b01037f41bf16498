"""
Right-hand sides of the first-change and compactified soliton systems, their biaxial reductions,
chart conversions and the conserved/residual quantities monitored along trajectories.

Array layouts:
    primal   (xi, L1, L2, L3, R1, R2, R3)         biaxial primal   (xi, L1, L2, R1, R2)
    compact  (Lcal, X1, X2, X3, Y1, Y2, Y3)       biaxial compact  (Lcal, X1, X2, Y1, Y2)

The *_field functions are unchecked and used inside the integrator; the rhs_* functions validate
their input and accept either arrays or state objects.
"""
import numpy as np

from dynamics.exceptions import ConversionError, DomainError
from dynamics.states import CompactState, ConservedReport, PrimalState
from dynamics.validator import check_finite

SWAP23 = np.array([0, 1, 3, 2, 4, 6, 5])
BIAXIAL_TOL = 1e-9


def primal_field(y, lam=0.0):
    xi, L1, L2, L3, R1, R2, R3 = y
    # (L2 + L3) grouped so that the (2 3) swap is exact in floating point
    trace = L1 + (L2 + L3)
    return np.array([
        -(L1 * L1 + (L2 * L2 + L3 * L3)) - lam,
        -xi * L1 + 0.5 * R1 * R1 - 0.5 * (R2 - R3) ** 2 - lam,
        -xi * L2 + 0.5 * R2 * R2 - 0.5 * (R1 - R3) ** 2 - lam,
        -xi * L3 + 0.5 * R3 * R3 - 0.5 * (R1 - R2) ** 2 - lam,
        R1 * (2.0 * L1 - trace),
        R2 * (2.0 * L2 - trace),
        R3 * (2.0 * L3 - trace),
    ])


def compact_field(y, lam=0.0):
    Lcal, X1, X2, X3, Y1, Y2, Y3 = y
    shift = lam * Lcal * Lcal
    q = X1 * X1 + (X2 * X2 + X3 * X3) + shift
    trace = X1 + (X2 + X3)
    return np.array([
        Lcal * q,
        0.5 * Y1 * Y1 - 0.5 * (Y2 - Y3) ** 2 - X1 - shift + X1 * q,
        0.5 * Y2 * Y2 - 0.5 * (Y1 - Y3) ** 2 - X2 - shift + X2 * q,
        0.5 * Y3 * Y3 - 0.5 * (Y1 - Y2) ** 2 - X3 - shift + X3 * q,
        Y1 * (2.0 * X1 - trace + q),
        Y2 * (2.0 * X2 - trace + q),
        Y3 * (2.0 * X3 - trace + q),
    ])


def biaxial_primal_field(y, lam=0.0):
    xi, L1, L2, R1, R2 = y
    return np.array([
        -L1 * L1 - 2.0 * L2 * L2 - lam,
        -xi * L1 + 0.5 * R1 * R1 - lam,
        -xi * L2 + R1 * R2 - 0.5 * R1 * R1 - lam,
        R1 * (L1 - 2.0 * L2),
        -R2 * L1,
    ])


def biaxial_compact_field(y, lam=0.0):
    Lcal, X1, X2, Y1, Y2 = y
    shift = lam * Lcal * Lcal
    q = X1 * X1 + 2.0 * X2 * X2 + shift
    return np.array([
        Lcal * q,
        0.5 * Y1 * Y1 - X1 - shift + X1 * q,
        Y1 * Y2 - 0.5 * Y1 * Y1 - X2 - shift + X2 * q,
        Y1 * (X1 - 2.0 * X2 + q),
        Y2 * (q - X1),
    ])


def einstein_field(y, lam=0.0):
    """Six-equation system in (L, R) with xi replaced by L1 + L2 + L3."""
    L = np.asarray(y)[:3]
    full = primal_field(np.concatenate(([L[0] + (L[1] + L[2])], y)), lam)
    return full[1:]


def _as_array(state, name="state"):
    if isinstance(state, (PrimalState, CompactState)):
        return state.to_array()
    return check_finite(name, state)


def rhs_primal(state, lam=0.0):
    """
    Derivative of the first-change system with respect to arclength r.

    Args:
        state: PrimalState or array (xi, L1, L2, L3, R1, R2, R3)
        lam: Einstein constant

    Returns:
        np.ndarray: (xi', L1', L2', L3', R1', R2', R3')
    """
    return primal_field(_as_array(state), _checked_lambda(lam))


def rhs_compact(state, lam=0.0):
    return compact_field(_as_array(state), _checked_lambda(lam))


def rhs_biaxial_primal(state, lam=0.0):
    return biaxial_primal_field(_as_array(state), _checked_lambda(lam))


def rhs_biaxial_compact(state, lam=0.0):
    return biaxial_compact_field(_as_array(state), _checked_lambda(lam))


def rhs_einstein(state, lam=0.0):
    return einstein_field(_as_array(state), _checked_lambda(lam))


def _checked_lambda(lam):
    if not np.isfinite(lam):
        raise DomainError(f"'lambda' is a finite float, got {lam}.")
    return float(lam)


def primal_array_to_compact(y):
    y = np.asarray(y, dtype=float)
    xi = y[..., 0]
    if np.any(~(xi > 0)):
        raise ConversionError(f"compact chart requires xi > 0, got xi = {xi}.")
    out = y / xi[..., None]
    out[..., 0] = 1.0 / xi
    return out


def compact_array_to_primal(y):
    y = np.asarray(y, dtype=float)
    Lcal = y[..., 0]
    if np.any(~(Lcal > 0)):
        raise ConversionError(f"primal chart requires Lcal > 0, got Lcal = {Lcal}.")
    out = y / Lcal[..., None]
    out[..., 0] = 1.0 / Lcal
    return out


def primal_to_compact(state: PrimalState, s=0.0):
    if not state.xi > 0:
        raise ConversionError(f"compact chart requires xi > 0, got xi = {state.xi}.")
    return CompactState.from_array(s, primal_array_to_compact(state.to_array()))


def compact_to_primal(state: CompactState, r=0.0):
    if not state.Lcal > 0:
        raise ConversionError(f"primal chart requires Lcal > 0, got Lcal = {state.Lcal}.")
    return PrimalState.from_array(r, compact_array_to_primal(state.to_array()))


def swap23(y):
    """Applies the (2 3) index permutation to a 7-component primal or compact array."""
    return np.asarray(y)[..., SWAP23]


def embed_biaxial(y):
    y = np.asarray(y)
    return y[..., [0, 1, 2, 2, 3, 4, 4]]


def restrict_biaxial(y):
    y = np.asarray(y)
    return y[..., [0, 1, 2, 4, 5]]


def as_seven(y):
    y = np.asarray(y, dtype=float)
    return embed_biaxial(y) if y.shape[-1] == 5 else y


def conserved_arrays(states, lam=0.0):
    """
    Vectorised conserved quantities for primal arrays of shape (..., 7) or (..., 5).

    Returns:
        tuple: (C with NaN where the state is not biaxial, Z, xi - L1 - L2 - L3)
    """
    y = as_seven(states)
    xi, L, R = y[..., 0], y[..., 1:4], y[..., 4:7]
    biaxial = np.abs(L[..., 1] - L[..., 2]) + np.abs(R[..., 1] - R[..., 2]) \
        < BIAXIAL_TOL * (1.0 + np.linalg.norm(y, axis=-1))
    R1, R2, L1, L2 = R[..., 0], R[..., 1], L[..., 0], L[..., 1]
    C = 2.0 * R1 * R2 - 0.5 * R1 ** 2 + L1 ** 2 + 2.0 * L2 ** 2 - xi ** 2
    C = np.where(biaxial, C, np.nan)
    Z = _einstein_sum(L, R) - 2.0 * lam - xi ** 2
    return C, Z, xi - np.sum(L, axis=-1)


def _einstein_sum(L, R):
    R1, R2, R3 = R[..., 0], R[..., 1], R[..., 2]
    curvature = 0.5 * (R1 ** 2 - (R2 - R3) ** 2 + R2 ** 2 - (R1 - R3) ** 2 + R3 ** 2 - (R1 - R2) ** 2)
    return curvature + np.sum(L ** 2, axis=-1)


def conserved_quantities(state, lam=0.0):
    """
    Args:
        state: PrimalState or primal array (7 or 5 components)
        lam: Einstein constant

    Returns:
        ConservedReport: C (None off the biaxial subspace), Z and xi - sum(L)
    """
    y = _as_array(state)
    C, Z, gap = conserved_arrays(y, lam)
    C = float(C)
    return ConservedReport(C=None if np.isnan(C) else C, Z=float(Z), xi_minus_trace=float(gap))


def conserved_scale(states):
    """Size of the terms cancelling inside C and Z; used to normalise their drift."""
    y = as_seven(states)
    return np.sum(y ** 2, axis=-1)


def einstein_residual(y, lam=0.0):
    """Z_E for a six-component (L, R) array of the Einstein system; Z_E'/2 = -(L1 + L2 + L3) Z_E."""
    y = np.asarray(y, dtype=float)
    L, R = y[..., :3], y[..., 3:6]
    return _einstein_sum(L, R) - 2.0 * lam - np.sum(L, axis=-1) ** 2


def ricci_flat_constraints(y):
    """Both entries vanish on the alpha = 0 branch of the biaxial compact system (lambda = 0)."""
    Lcal, X1, X2, Y1, Y2 = np.asarray(y, dtype=float)
    return np.array([X1 + 2.0 * X2 - 1.0, X1 ** 2 + 2.0 * X2 ** 2 + 2.0 * Y1 * Y2 - 0.5 * Y1 ** 2 - 1.0])
