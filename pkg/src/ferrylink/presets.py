"""Named experiment presets.

The vectors are the reference validation scenarios: scenario 1 has an 8.5 km
end-to-end distance where both hops can coexist; scenario 2 has 25 km, forcing
the full ferry loop. The "opt" vectors are the published multi-objective
optima, the "bench" vectors the unoptimized nearest/farthest hover-point
baselines. All data volumes in Gbit.
"""

from __future__ import annotations

from .config import ScenarioConfig, from_dict
from .errors import ConfigInvalid


def _ferry(d_gd, d1, d2, alpha, beta, buf_gbit, **extra):
    cfg = {
        "kind": "ferry",
        "geometry": {"end_to_end_m": d_gd},
        "ferry": {"d_load_m": d1, "d_offload_m": d2, "alpha": alpha, "beta": beta,
                  "buffer_gbit": buf_gbit},
    }
    for key, value in extra.items():
        cfg["ferry"][key] = value
    return cfg


PRESETS: dict[str, dict] = {
    # Scenario 1: static relay possible (D = 8.5 km).
    "scenario1-default": {"kind": "ferry"},
    "scenario1-stationary-max": _ferry(8500.0, 500.0, 500.0, 1.0, 0.0, 32.0,
                                       stationary_d_rg_m=4250.0),
    "scenario1-stationary-min": _ferry(8500.0, 500.0, 500.0, 1.0, 0.0, 32.0,
                                       stationary_d_rg_m=500.0),
    "scenario1-32g-opt1": _ferry(8500.0, 3450.5, 632.0, 0.64, 0.11, 32.0),
    "scenario1-32g-opt2": _ferry(8500.0, 505.5, 576.0, 0.88, 0.12, 32.0),
    "scenario1-64g-opt1": _ferry(8500.0, 3496.9, 586.2, 0.50, 0.07, 64.0),
    "scenario1-64g-opt2": _ferry(8500.0, 777.2, 769.3, 0.67, 0.05, 64.0),
    # Scenario 2: ferry-only regime (D = 25 km).
    "scenario2-bench1-32g": _ferry(25000.0, 500.0, 500.0, 1.0, 0.0, 32.0),
    "scenario2-bench2-32g": _ferry(25000.0, 7999.9, 7999.9, 1.0, 0.0, 32.0),
    "scenario2-bench1-64g": _ferry(25000.0, 500.0, 500.0, 1.0, 0.0, 64.0),
    "scenario2-bench2-64g": _ferry(25000.0, 7999.9, 7999.9, 1.0, 0.0, 64.0),
    "scenario2-32g-opt1": _ferry(25000.0, 953.0, 510.2, 0.50, 0.13, 32.0),
    "scenario2-32g-opt2": _ferry(25000.0, 779.6, 547.2, 0.60, 0.26, 32.0),
    "scenario2-64g-opt1": _ferry(25000.0, 829.5, 3459.3, 0.50, 0.0, 64.0),
    "scenario2-64g-opt2": _ferry(25000.0, 839.3, 523.2, 0.85, 0.08, 64.0),
    # Optimizer runs (desk-scale optimizer defaults from the config schema).
    "scenario2-pareto-32g": {
        "kind": "pareto",
        "geometry": {"end_to_end_m": 25000.0},
        "ferry": {"buffer_gbit": 32.0},
    },
    "scenario2-pareto-64g": {
        "kind": "pareto",
        "geometry": {"end_to_end_m": 25000.0},
        "ferry": {"buffer_gbit": 64.0},
    },
    # Table and curve exports.
    "acm-table": {"kind": "acm-table"},
    "link-curve-default": {"kind": "link-curve"},
    "static-opt-default": {"kind": "static-opt"},
}


def load_preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        known = ", ".join(sorted(PRESETS))
        raise ConfigInvalid(f"unknown preset '{name}'; available: {known}")
    return from_dict(PRESETS[name])
