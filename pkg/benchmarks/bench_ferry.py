#!/usr/bin/env python3
"""Benchmark the compiled ferry kernel against the pure-Python reference.

Runs each scenario with both kernels, checks the traces are bit-identical,
and reports wall time plus speedup. The optimizer's cost is dominated by
these runs, so the speedup translates directly to Pareto-search throughput.
"""

import time

import numpy as np

from ferrylink.ferry import FerryParams, available_engines, run

SCENARIOS = {
    "overlap-32g-opt": FerryParams(big_d=8500.0, d_load=505.5, d_offload=576.0,
                                   alpha=0.88, beta=0.12, buffer_bits=32e9,
                                   t_total_s=3000.0),
    "ferry-32g-bench": FerryParams(big_d=25000.0, d_load=500.0, d_offload=500.0,
                                   alpha=1.0, beta=0.0, buffer_bits=32e9,
                                   t_total_s=3000.0),
    "ferry-64g-opt": FerryParams(big_d=25000.0, d_load=839.3, d_offload=523.2,
                                 alpha=0.85, beta=0.08, buffer_bits=64e9,
                                 t_total_s=3000.0),
    "long-horizon": FerryParams(big_d=25000.0, d_load=779.6, d_offload=547.2,
                                alpha=0.60, beta=0.26, buffer_bits=32e9,
                                t_total_s=30000.0),
    "fine-steps": FerryParams(big_d=25000.0, d_load=500.0, d_offload=500.0,
                              alpha=1.0, beta=0.0, buffer_bits=32e9,
                              dt_s=0.1, t_total_s=3000.0),
}

TRACE_FIELDS = ("state", "x_m", "buffered_bits", "delivered_bits",
                "loaded_bits", "load_bps", "offload_bps", "passthrough_bps")


def time_engine(params, engine, repeats):
    best = float("inf")
    trace = None
    for _ in range(repeats):
        start = time.perf_counter()
        trace, _ = run(params, engine=engine)
        best = min(best, time.perf_counter() - start)
    return best, trace


def main():
    engines = available_engines()
    print(f"available engines: {', '.join(engines)}")
    if "compiled" not in engines:
        print("compiled kernel not built; nothing to compare")
        return
    header = f"{'scenario':18s} {'steps':>7s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, params in SCENARIOS.items():
        t_py, trace_py = time_engine(params, "python", repeats=3)
        t_c, trace_c = time_engine(params, "compiled", repeats=5)
        for field in TRACE_FIELDS:
            if not np.array_equal(getattr(trace_py, field), getattr(trace_c, field)):
                raise SystemExit(f"kernel mismatch in {name}: {field}")
        print(f"{name:18s} {params.n_steps:7d} {t_py * 1e3:9.2f}ms "
              f"{t_c * 1e3:9.2f}ms {t_py / t_c:7.1f}x")
    print("all traces bit-identical across kernels")


if __name__ == "__main__":
    main()
