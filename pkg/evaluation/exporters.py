import json
import os

import numpy as np


def ensure_directory(directory):
    os.makedirs(directory, exist_ok=True)
    return directory


def to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if np.isnan(value) else value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(payload), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path


def slug(value):
    return f"{value:+.6f}".replace("+", "p").replace("-", "m").replace(".", "_")
