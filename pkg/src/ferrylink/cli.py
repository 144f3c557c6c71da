"""Batch experiment runner.

Subcommands map one-to-one onto scenario kinds: ``acm-table`` dumps the rate
table, ``link-curve`` the capacity-vs-distance curve, ``static-opt`` the hover
optimization, ``ferry-sim`` one ferry (or stationary) run, ``pareto`` the
multi-objective optimization. Every run writes a manifest echoing the fully
resolved configuration so results can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, acm, moga, staticrelay
from .config import ScenarioConfig, from_dict, load_config
from .errors import FerrylinkError, ParseError, ValidationError
from .ferry import active_engine_name, run, run_stationary
from .linkmodel import throughput_curve
from .presets import load_preset


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(cfg: ScenarioConfig, args, out_dir: Path) -> Path:
    payload = {
        "package": "ferrylink",
        "version": __version__,
        "kind": cfg.kind,
        "seed": cfg.seed,
        "preset": args.preset,
        "engine": active_engine_name(),
        "config": cfg.raw,
    }
    path = out_dir / "manifest.json"
    _write_json(path, payload)
    return path


def _resolve_config(args, kind: str) -> ScenarioConfig:
    if args.preset and args.config:
        raise ValidationError("pass either --preset or --config, not both")
    if args.preset:
        cfg = load_preset(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        cfg = from_dict({})
    raw = json.loads(json.dumps(cfg.raw))  # deep copy via round-trip
    raw["kind"] = kind
    if args.seed is not None:
        raw["seed"] = args.seed
    if getattr(args, "big_d", None) is not None:
        raw["geometry"]["end_to_end_m"] = args.big_d
    return from_dict({k: v for k, v in raw.items()})


def _out_dir(args, cfg: ScenarioConfig) -> Path:
    out = args.out or os.environ.get("FERRYLINK_OUT_DIR") or cfg.out_dir or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_acm_table(cfg: ScenarioConfig, args, out_dir: Path) -> list[Path]:
    table = cfg.acm_table()
    if args.format == "json":
        path = out_dir / "acm_table.json"
        _write_json(path, [vars(m) for m in table.modes])
    else:
        path = out_dir / "acm_table.csv"
        acm.dump_table_csv(table, path)
    return [path]


def _cmd_link_curve(cfg: ScenarioConfig, args, out_dir: Path) -> list[Path]:
    ln = cfg.raw["link"]
    grid = np.arange(ln["grid_start_m"], ln["grid_stop_m"] + ln["grid_step_m"] / 2,
                     ln["grid_step_m"])
    curve = throughput_curve(cfg.link_config(), grid)
    path = out_dir / "link_curve.csv"
    curve.to_csv(path)
    return [path]


def _cmd_static_opt(cfg: ScenarioConfig, args, out_dir: Path) -> list[Path]:
    result = staticrelay.optimize(cfg.acm_table(), cfg.raw["geometry"]["end_to_end_m"])
    path = out_dir / "static_opt.json"
    _write_json(path, result.to_dict())
    return [path]


def _cmd_ferry(cfg: ScenarioConfig, args, out_dir: Path) -> list[Path]:
    params = cfg.ferry_params()
    d_rg = cfg.raw["ferry"]["stationary_d_rg_m"]
    if d_rg is not None:
        trace, metrics = run_stationary(params, d_rg)
    else:
        trace, metrics = run(params)
    trace_path = out_dir / "trace.csv"
    trace.to_csv(trace_path)
    metrics_path = out_dir / "metrics.json"
    _write_json(metrics_path, metrics.to_dict())
    return [trace_path, metrics_path]


def _cmd_pareto(cfg: ScenarioConfig, args, out_dir: Path) -> list[Path]:
    template = cfg.ferry_params()
    evaluator = moga.ferry_evaluator(template)
    params = cfg.moga_params()
    paths = []
    snapshot_rows = []

    def record(gen, archive):
        for rec in archive.to_records():
            snapshot_rows.append({"generation": gen, **rec})

    callback = record if cfg.raw["moga"]["snapshots"] else None
    archive = moga.run(cfg.bounds(), params, evaluator, on_generation=callback)

    front_path = out_dir / "pareto.json"
    _write_json(front_path, archive.to_records())
    paths.append(front_path)
    if snapshot_rows:
        snap_path = out_dir / "pareto_snapshots.csv"
        with open(snap_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["generation", "d1_m", "d2_m",
                                                    "alpha", "beta",
                                                    "delivered_bits", "delay_s"])
            writer.writeheader()
            writer.writerows(snapshot_rows)
        paths.append(snap_path)
    return paths


_COMMANDS = {
    "acm-table": _cmd_acm_table,
    "link-curve": _cmd_link_curve,
    "static-opt": _cmd_static_opt,
    "ferry-sim": _cmd_ferry,
    "pareto": _cmd_pareto,
}

_KIND_OF = {"acm-table": "acm-table", "link-curve": "link-curve",
            "static-opt": "static-opt", "ferry-sim": "ferry", "pareto": "pareto"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ferrylink",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="scenario file (strict JSON schema)")
        p.add_argument("--preset", help="named preset scenario")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", help="output directory (or $FERRYLINK_OUT_DIR)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "static-opt":
            p.add_argument("--D", dest="big_d", type=float,
                           help="end-to-end distance override, meters")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args, _KIND_OF[args.command])
        out_dir = _out_dir(args, cfg)
        written = _COMMANDS[args.command](cfg, args, out_dir)
        written.append(_manifest(cfg, args, out_dir))
    except FerrylinkError as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return 2 if isinstance(exc, (ParseError, ValidationError)) else 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
