import operator

import numpy as np

from dynamics.exceptions import DomainError

INF = float("inf")


def is_in_bound(value, bound):
    """A tuple bound is the open interval (low, high), a list bound the closed one; infinite ends are unbounded."""
    inside = operator.lt if type(bound) is tuple else operator.le
    low, high = bound
    return (low == -INF or inside(low, value)) and (high == INF or inside(value, high))


def _range_hint(bound, wording="range"):
    return "" if bound is None else f"and value should be in {wording}: {bound}"


def check_int(name: str, value, bound=None):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        if bound is None or is_in_bound(value, bound):
            return int(value)
    if isinstance(value, float) and value.is_integer():
        if bound is None or is_in_bound(value, bound):
            return int(value)
    raise DomainError(f"'{name}' is an integer {_range_hint(bound)}.")


def check_float(name: str, value, bound=None):
    if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
        if np.isfinite(value) and (bound is None or is_in_bound(value, bound)):
            return float(value)
    raise DomainError(f"'{name}' is a finite float {_range_hint(bound)}.")


def check_str(name: str, value: str, bound=None):
    if type(value) is str and (bound is None or value in bound):
        return value
    raise DomainError(f"'{name}' is a string {_range_hint(bound, 'the choices')}.")


def check_bool(name: str, value: bool):
    if type(value) is bool:
        return value
    raise DomainError(f"'{name}' is a boolean, got {value!r}.")


def check_finite(name: str, values):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"'{name}' contains non-finite entries: {values}.")
    return values


def check_unit_sphere(name: str, values, tol=1e-12):
    values = check_finite(name, values)
    norm_sq = float(np.sum(values ** 2))
    if abs(norm_sq - 1.0) > tol:
        raise DomainError(f"'{name}' should lie on the unit sphere, got squared norm {norm_sq!r}.")
    return values


def check_no_extra(owner: str, extra: dict):
    if extra:
        raise DomainError(f"{owner} got unexpected parameters: {sorted(extra)}.")
