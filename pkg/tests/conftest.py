import copy

import pytest

BASE_RAW = {
    "topology": {"kind": "fat_tree", "k": 4, "n_controllers": 2},
    "arrivals": {"process": "poisson", "mean_rate": 5.88, "slot_ms": 10.0, "a_max": 1000},
    "hotspot": {"pod_index": 0, "rate": 175.0},
    "prediction": {"mean_window": 0, "error_rate": 0.0},
    "policy": {
        "name": "poscad",
        "V": 10.0,
        "gamma": 1.0,
        "beta1": 1.0,
        "beta2": 1.0,
        "devolution": True,
    },
    "capacities": {"controller": 600, "switch": 10},
    "run": {"horizon": 2000, "warmup": 200, "master_seed": 1},
}


def make_raw(**sections) -> dict:
    """Deep copy of the base config with per-section overrides merged in."""
    raw = copy.deepcopy(BASE_RAW)
    for key, val in sections.items():
        if val is None:
            raw.pop(key, None)
        elif isinstance(val, dict) and isinstance(raw.get(key), dict):
            raw[key].update(val)
        else:
            raw[key] = val
    return raw


@pytest.fixture
def base_raw():
    return make_raw()
