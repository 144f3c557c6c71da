"""Scenario files: a strict JSON key-value schema with unit-suffixed keys.

Every key has a default (the defaults reproduce the reference validation
scenario: 8.5 km end-to-end, 8 streams, 6 MHz, 32 Gbit buffer, 50 m/s). An
empty file yields exactly the defaults; unknown keys are rejected by name;
value constraints are reported with the offending key. Data volumes are
configured in Gbit and converted to bits internally.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass

from . import moga
from .acm import AcmTable, default_table, load_table_csv
from .errors import ConfigInvalid, ParseError, ValidationError
from .ferry.params import FerryParams
from .linkmodel import Interferer, LinkConfig, LosGeometry, PathLossParams, RicianParams

KINDS = ("acm-table", "link-curve", "static-opt", "ferry", "pareto")

# Noise power calibrated so the default link's per-stream capacity curve
# crosses the lowest positive mode's rate (0.459 bps/Hz) at 6.0 km.
CALIBRATED_NOISE_W = 4.4212e-14

DEFAULTS = {
    "kind": "ferry",
    "seed": 0,
    "out_dir": None,
    "geometry": {
        "end_to_end_m": 8500.0,
    },
    "acm": {
        "source": "embedded",
        "csv_path": None,
        "bandwidth_hz": 6.0e6,
        "cp_factor": 1.0,
    },
    "ferry": {
        "d_load_m": 500.0,
        "d_offload_m": 500.0,
        "alpha": 1.0,
        "beta": 0.0,
        "buffer_gbit": 32.0,
        "n_streams": 8,
        "speed_mps": 50.0,
        "dt_s": 1.0,
        "t_total_s": 3000.0,
        "rate_floor_bps": 22032000.0,
        "passthrough": True,
        "stationary_d_rg_m": None,
    },
    "link": {
        "n_rx": 64,
        "n_streams": 8,
        "carrier_hz": 60.0e9,
        "tx_power_w": 0.078,
        "noise_power_w": CALIBRATED_NOISE_W,
        "k_factor_db": 5.0,
        "correlation_rho": 0.5,
        "pathloss_slope": 2.0,
        "sigma_shadow_db": 0.0,
        "reference_m": 1.0,
        "angle_spread_deg": 120.0,
        "interferer_distances_m": [],
        "grid_start_m": 500.0,
        "grid_stop_m": 9000.0,
        "grid_step_m": 25.0,
    },
    "moga": {
        "population": 40,
        "generations": 60,
        "offspring": 8,
        "p_cm": 0.1,
        "omega_lo": -0.25,
        "omega_hi": 1.25,
        "mutation_sigma": 0.1,
        "n_box": 100,
        "snapshots": False,
    },
}

# Keys whose default is None, with the type they take when present.
_NULLABLE = {
    "out_dir": str,
    "acm.csv_path": str,
    "ferry.stationary_d_rg_m": (int, float),
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        dotted = f"{path}{key}"
        if key not in base:
            raise ParseError(f"unknown key '{dotted}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ParseError(f"key '{dotted}' must be a section (object)")
            out[key] = _merge(base[key], value, dotted + ".")
        else:
            out[key] = _check_type(dotted, base[key], value)
    return out


def _check_type(dotted: str, default, value):
    if value is None:
        if dotted in _NULLABLE:
            return None
        raise ValidationError(f"key '{dotted}' may not be null")
    if dotted in _NULLABLE and default is None:
        expected = _NULLABLE[dotted]
    elif isinstance(default, bool):
        expected = bool
    elif isinstance(default, (int, float)):
        expected = (int, float)
    elif isinstance(default, str):
        expected = str
    elif isinstance(default, list):
        expected = list
    else:
        expected = type(default)
    if expected is bool and not isinstance(value, bool):
        raise ValidationError(f"key '{dotted}' must be a boolean")
    if not isinstance(value, expected) or (expected == (int, float) and isinstance(value, bool)):
        raise ValidationError(f"key '{dotted}' has the wrong type")
    return value


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved, validated scenario description."""

    raw: dict

    @property
    def kind(self) -> str:
        return self.raw["kind"]

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def out_dir(self):
        return self.raw["out_dir"]

    def acm_table(self) -> AcmTable:
        a = self.raw["acm"]
        if a["source"] == "csv":
            return load_table_csv(a["csv_path"], a["bandwidth_hz"], a["cp_factor"])
        return default_table(a["bandwidth_hz"], a["cp_factor"])

    def ferry_params(self) -> FerryParams:
        f = self.raw["ferry"]
        return FerryParams(
            big_d=self.raw["geometry"]["end_to_end_m"],
            d_load=f["d_load_m"], d_offload=f["d_offload_m"],
            alpha=f["alpha"], beta=f["beta"],
            buffer_bits=f["buffer_gbit"] * 1e9,
            n_streams=f["n_streams"], speed_mps=f["speed_mps"], dt_s=f["dt_s"],
            t_total_s=f["t_total_s"], rate_floor_bps=f["rate_floor_bps"],
            passthrough=f["passthrough"], table=self.acm_table(),
        )

    def link_config(self) -> LinkConfig:
        ln = self.raw["link"]
        return LinkConfig(
            n_rx=ln["n_rx"], n_tx=ln["n_streams"], carrier_hz=ln["carrier_hz"],
            path_loss=PathLossParams.friis(ln["carrier_hz"], ln["pathloss_slope"],
                                           ln["sigma_shadow_db"], ln["reference_m"]),
            rician=RicianParams(ln["k_factor_db"], ln["correlation_rho"]),
            tx_power_w=ln["tx_power_w"], noise_power_w=ln["noise_power_w"],
            interferers=tuple(Interferer(float(d), ln["n_streams"])
                              for d in ln["interferer_distances_m"]),
            los=LosGeometry(angle_spread_deg=ln["angle_spread_deg"]),
            seed=self.seed,
        )

    def moga_params(self) -> moga.MogaParams:
        m = self.raw["moga"]
        return moga.MogaParams(
            population=m["population"], generations=m["generations"],
            offspring=m["offspring"], p_cm=m["p_cm"],
            omega_range=(m["omega_lo"], m["omega_hi"]),
            mutation_sigma=m["mutation_sigma"], n_box=m["n_box"], seed=self.seed,
        )

    def bounds(self) -> moga.Bounds:
        table = self.acm_table()
        return moga.Bounds(d_load=(table.d_min, table.d_max),
                           d_offload=(table.d_min, table.d_max))


def _validate(raw: dict) -> None:
    def bad(key, constraint):
        raise ValidationError(f"key '{key}' {constraint}")

    if raw["kind"] not in KINDS:
        bad("kind", f"must be one of {KINDS}")
    if not isinstance(raw["seed"], int) or raw["seed"] < 0:
        bad("seed", "must be a non-negative integer")
    if raw["acm"]["source"] not in ("embedded", "csv"):
        bad("acm.source", "must be 'embedded' or 'csv'")
    if raw["acm"]["source"] == "csv" and not raw["acm"]["csv_path"]:
        bad("acm.csv_path", "is required when acm.source = 'csv'")

    cfg = ScenarioConfig(raw)
    try:
        table = cfg.acm_table()
    except (ConfigInvalid, OSError) as exc:
        raise ValidationError(f"key 'acm' invalid: {exc}") from exc

    f = raw["ferry"]
    if not table.d_min <= f["d_load_m"] <= table.d_max:
        bad("ferry.d_load_m", f"must be within [{table.d_min}, {table.d_max}] m")
    if not table.d_min <= f["d_offload_m"] <= table.d_max:
        bad("ferry.d_offload_m", f"must be within [{table.d_min}, {table.d_max}] m")
    if f["stationary_d_rg_m"] is None and raw["kind"] in ("ferry", "pareto"):
        try:
            cfg.ferry_params()
        except ConfigInvalid as exc:
            raise ValidationError(f"key 'ferry' invalid: {exc}") from exc
    ln = raw["link"]
    if raw["kind"] == "link-curve":
        if ln["grid_step_m"] <= 0 or ln["grid_stop_m"] <= ln["grid_start_m"]:
            bad("link.grid_step_m", "grid must be ascending with positive step")
        try:
            cfg.link_config()
        except ConfigInvalid as exc:
            raise ValidationError(f"key 'link' invalid: {exc}") from exc
    if raw["kind"] == "pareto":
        try:
            cfg.moga_params()
        except ConfigInvalid as exc:
            raise ValidationError(f"key 'moga' invalid: {exc}") from exc


def from_dict(overrides: dict) -> ScenarioConfig:
    """Resolve overrides against defaults, then validate."""
    raw = _merge(DEFAULTS, overrides)
    _validate(raw)
    return ScenarioConfig(raw)


def load_config(path) -> ScenarioConfig:
    """Load a scenario file; empty files mean all defaults."""
    with open(path) as fh:
        text = fh.read()
    if not text.strip():
        return from_dict({})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed scenario file: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("scenario file must contain a JSON object")
    return from_dict(data)
