"""Shared ferry-run invariant checks used by the property suites."""

from __future__ import annotations

import numpy as np

from ferrylink.ferry import available_engines, run


def check_ferry_invariants(params):
    """Run once and assert every structural invariant of the loop."""
    trace, metrics = run(params, engine="python")

    if "compiled" in available_engines():
        fast, fast_metrics = run(params, engine="compiled")
        for field in ("state", "x_m", "buffered_bits", "delivered_bits",
                      "loaded_bits", "load_bps", "offload_bps",
                      "passthrough_bps"):
            assert np.array_equal(getattr(trace, field), getattr(fast, field)), \
                f"kernel divergence in {field}"
        assert metrics == fast_metrics

    p = params.snapped()
    t_d, t_r, loaded = trace.buffered_bits, trace.delivered_bits, trace.loaded_bits

    # Conservation: everything taken from the source is in flight or delivered.
    scale = np.maximum(loaded, 1.0)
    assert np.all(np.abs(loaded - (t_d + t_r)) <= 1e-9 * scale), "conservation"

    assert np.all(t_d >= -1e-6), "buffer below zero"
    assert np.all(t_d <= p.buffer_bits * (1 + 1e-12) + 1e-6), "buffer above size"
    assert np.all(np.diff(t_r) >= 0), "delivered decreased"

    dx = np.abs(np.diff(trace.x_m))
    step_len = p.speed_mps * p.dt_s
    assert np.all((dx <= 1e-9) | (np.abs(dx - step_len) <= 1e-9)), "position step law"
    assert np.all(trace.x_m >= p.d_load - 1e-9), "position below load point"
    assert np.all(trace.x_m <= p.big_d - p.d_offload + 1e-9), "position past offload point"

    recon = trace.effective_rate_bps[1:] * trace.t_s[1:]
    assert np.allclose(recon, t_r[1:], rtol=1e-12, atol=1e-6), "rate-time identity"

    applied = trace.state[1:]
    _check_state_order(applied)

    overlap = p.big_d <= 2.0 * p.table.d_max
    has_dark = np.any((applied == 3) | (applied == 7))
    if overlap:
        assert not has_dark, "dark states in overlapping-coverage regime"
    else:
        gap = p.big_d - 2.0 * p.table.d_max
        reached_far_side = np.any(applied >= 4)
        if reached_far_side and gap > step_len:
            assert has_dark, "missing dark states despite a wide gap"

    return trace, metrics


def _check_state_order(applied):
    """Applied states run 1..8 in order within a loop; a drop in the state id
    marks the next loop and may only land on a loading hover, an outbound
    flight, or (for zero-length routes) the offload hover."""
    assert set(int(s) for s in applied) <= set(range(1, 9)), "unknown state id"
    distinct = [int(applied[0])]
    for s in applied[1:]:
        if int(s) != distinct[-1]:
            distinct.append(int(s))
    for a, b in zip(distinct, distinct[1:]):
        if b < a:
            assert b in (1, 2, 5), f"loop wrapped into state {b}"
        else:
            assert b > a, f"state order violated around {a}->{b}"
