import copy

import yaml

from dynamics.exceptions import DomainError

DEFAULTS = {
    "integrator": {"rtol": 1e-10, "atol": 1e-12, "max_steps": 500000, "blow_up_bound": 1e6},
    "startup": {"epsilon": 1e-4, "handoff_radius": 0.05, "series_order": 2},
    "classifier": {"ball": 0.05, "settle_time": 30.0, "tail_fraction": 0.2, "zero_threshold": 5e-3,
                   "decay_floor": 0.25, "xi_floor": 1e-6, "ricci_flat_tol": 1e-6, "sign_threshold": 0.0,
                   "limit_degree": 2},
    "search": {"horizon": 60.0, "horizon_cap": 480.0, "tol": 1e-9, "max_iterations": 200, "mode": "thread",
               "n_workers": None, "verify": True, "verify_horizon": 480.0, "min_seed_width": 1e-6,
               "widen_factor": 2.0},
    "center_manifold": {"degree": 2, "radius": 0.1},
    "logging": {"log_to": "console", "log_file": None},
    "output": {"directory": "results", "record_timings": False},
}


def deep_merge(base: dict, override: dict):
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_yaml(path):
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise DomainError(f"config file {path} should hold a mapping, got {type(data).__name__}.")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise DomainError(f"unknown config sections in {path}: {sorted(unknown)}")
    return data


def effective_config(path=None, overrides=None):
    """Built-in defaults, then the YAML file at `path`, then `overrides` (CLI flags)."""
    config = copy.deepcopy(DEFAULTS)
    if path is not None:
        config = deep_merge(config, load_yaml(path))
    return deep_merge(config, overrides or {})
