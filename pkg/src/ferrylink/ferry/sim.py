"""Ferry-loop simulation: stepping, traces, derived metrics.

Movement and buffer accounting per step (duration ``dt``):

- flight states advance the position by exactly ``speed * dt`` and evaluate
  link rates at the *new* position;
- loading states add ``load_rate * dt`` to the buffer (clamped at the buffer
  size), offloading states drain ``offload_rate * dt`` (clamped at zero) and
  credit the drained amount to the station;
- whenever both hops have a positive rate and pass-through is enabled, an
  additional ``min(load_rate, offload_rate) * dt`` flows end-to-end directly,
  bypassing the buffer (it is counted both as loaded and as delivered);
- hover durations are fixed at state entry with the floor rule
  ``floor(remaining_bits / (hover_rate * dt))`` and are unbounded when the
  hover point has no link.

Transitions are checked after the move; zero-length states collapse, so the
same loop covers both the disjoint-coverage regime (all eight states) and the
overlapping regime (dark states never occur).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..staticrelay import e2e_se
from .params import (
    FerryParams,
    LOADING_STATES,
    OFFLOADING_STATES,
    SimState,
    _rate_at,
    initial_state,
    resolve_entry,
)


@lru_cache(maxsize=256)
def _snap(params: FerryParams) -> FerryParams:
    return params.snapped()


def step(state: SimState, params: FerryParams) -> SimState:
    """Advance one step; pure, total, deterministic."""
    params = _snap(params)
    thresholds, rates = params.rate_profile()
    dt = params.dt_s
    sid = state.state_id

    x = state.x
    if sid in (2, 3, 4):
        x = x + params.speed_mps * dt
    elif sid in (6, 7, 8):
        x = x - params.speed_mps * dt
    d_rg = params.big_d - x

    load = _rate_at(thresholds, rates, x)
    off = _rate_at(thresholds, rates, d_rg)
    m = min(load, off) if (params.passthrough and load > 0.0 and off > 0.0) else 0.0

    buffered = state.buffered_bits
    delivered = state.delivered_bits
    loaded = state.loaded_bits
    if sid in LOADING_STATES:
        inflow = load * dt
        room = params.buffer_bits - buffered
        if inflow > room:
            inflow = room
        buffered += inflow
        delivered += m * dt
        loaded += inflow + m * dt
        load_flow, off_flow = inflow / dt + m, m
    elif sid in OFFLOADING_STATES:
        outflow = off * dt
        if outflow > buffered:
            outflow = buffered
        buffered -= outflow
        delivered += outflow + m * dt
        loaded += m * dt
        load_flow, off_flow = m, outflow / dt + m
    else:
        m = 0.0
        load_flow, off_flow = 0.0, 0.0

    hover = state.hover_remaining
    loop = state.loop_index
    if sid in (1, 5):
        if hover > 0:
            hover -= 1
        if hover == 0:
            sid, hover, loop = resolve_entry(2 if sid == 1 else 6, x, buffered,
                                             loop, params)
    else:
        sid, hover, loop = resolve_entry(sid, x, buffered, loop, params)

    return SimState(step_index=state.step_index + 1, x=x, state_id=sid,
                    buffered_bits=buffered, delivered_bits=delivered,
                    loaded_bits=loaded, loop_index=loop, hover_remaining=hover,
                    load_flow_bps=load_flow, offload_flow_bps=off_flow,
                    passthrough_bps=m)


TRACE_COLUMNS = ("t_s", "state", "x_m", "d_rg_m", "T_d_bits", "T_r_bits",
                 "R_e_bps", "load_bps", "offload_bps", "passthrough_bps")


@dataclass(frozen=True)
class Trace:
    """Per-step time series of one run (row 0 is the initial condition)."""

    t_s: np.ndarray
    state: np.ndarray
    x_m: np.ndarray
    d_rg_m: np.ndarray
    buffered_bits: np.ndarray
    delivered_bits: np.ndarray
    effective_rate_bps: np.ndarray
    load_bps: np.ndarray
    offload_bps: np.ndarray
    passthrough_bps: np.ndarray
    loaded_bits: np.ndarray  # bookkeeping for the conservation invariant

    def __len__(self):
        return len(self.t_s)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for i in range(len(self.t_s)):
                writer.writerow([
                    repr(float(self.t_s[i])), int(self.state[i]),
                    repr(float(self.x_m[i])), repr(float(self.d_rg_m[i])),
                    repr(float(self.buffered_bits[i])),
                    repr(float(self.delivered_bits[i])),
                    repr(float(self.effective_rate_bps[i])),
                    repr(float(self.load_bps[i])),
                    repr(float(self.offload_bps[i])),
                    repr(float(self.passthrough_bps[i])),
                ])


@dataclass(frozen=True)
class FerryMetrics:
    """Scalars and per-loop durations derived from a trace."""

    delivered_total_bits: float
    connection_delay_s: float | None        # first instant delivery begins
    delay_to_rate_floor_s: float | None     # None = floor never reached
    rate_floor_bps: float
    loop_durations_s: tuple[float, ...]
    load_hover_durations_s: tuple[float, ...]
    offload_hover_durations_s: tuple[float, ...]
    completed_loops: int

    def to_dict(self):
        return {
            "delivered_total_bits": self.delivered_total_bits,
            "delivered_total_gbit": self.delivered_total_bits / 1e9,
            "connection_delay_s": self.connection_delay_s,
            "delay_to_rate_floor_s": self.delay_to_rate_floor_s,
            "rate_floor_reached": self.delay_to_rate_floor_s is not None,
            "rate_floor_bps": self.rate_floor_bps,
            "loop_durations_s": list(self.loop_durations_s),
            "load_hover_durations_s": list(self.load_hover_durations_s),
            "offload_hover_durations_s": list(self.offload_hover_durations_s),
            "completed_loops": self.completed_loops,
        }


def _run_python(params: FerryParams):
    """Reference kernel: plain Python loop over ``step``."""
    n = params.n_steps
    state_col = np.zeros(n + 1, dtype=np.int32)
    x_col = np.zeros(n + 1)
    td_col = np.zeros(n + 1)
    tr_col = np.zeros(n + 1)
    loaded_col = np.zeros(n + 1)
    load_col = np.zeros(n + 1)
    off_col = np.zeros(n + 1)
    pt_col = np.zeros(n + 1)

    s = initial_state(params)
    state_col[0], x_col[0] = s.state_id, s.x
    for i in range(1, n + 1):
        applied = s.state_id
        s = step(s, params)
        state_col[i] = applied
        x_col[i] = s.x
        td_col[i] = s.buffered_bits
        tr_col[i] = s.delivered_bits
        loaded_col[i] = s.loaded_bits
        load_col[i] = s.load_flow_bps
        off_col[i] = s.offload_flow_bps
        pt_col[i] = s.passthrough_bps
    return state_col, x_col, td_col, tr_col, loaded_col, load_col, off_col, pt_col


def _build_trace(params: FerryParams, cols) -> Trace:
    state_col, x_col, td_col, tr_col, loaded_col, load_col, off_col, pt_col = cols
    n = len(state_col) - 1
    t = np.arange(n + 1, dtype=float) * params.dt_s
    with np.errstate(divide="ignore", invalid="ignore"):
        r_e = np.where(t > 0, tr_col / np.where(t > 0, t, 1.0), 0.0)
    return Trace(t_s=t, state=state_col, x_m=x_col, d_rg_m=params.big_d - x_col,
                 buffered_bits=td_col, delivered_bits=tr_col,
                 effective_rate_bps=r_e, load_bps=load_col, offload_bps=off_col,
                 passthrough_bps=pt_col, loaded_bits=loaded_col)


def derive_metrics(trace: Trace, params: FerryParams) -> FerryMetrics:
    tr = trace.delivered_bits
    t = trace.t_s

    delivery_steps = np.nonzero(np.diff(tr) > 0)[0]
    tau0 = float(t[delivery_steps[0]]) if len(delivery_steps) else None

    floor = params.rate_floor_bps
    hit = np.nonzero((trace.effective_rate_bps >= floor) & (tr > 0))[0]
    t_star = float(t[hit[0]]) if len(hit) else None

    # Rows >= 1 are labelled with the state applied during the step ending
    # at that row's t; a loop spans the applied rows between two entries
    # into the load-hover state.
    applied = trace.state[1:]
    entries = [i for i in range(len(applied))
               if applied[i] == 1 and (i == 0 or applied[i - 1] != 1)]
    loops, t_l, t_o = [], [], []
    for a, b in zip(entries, entries[1:]):
        loops.append(float(b - a) * params.dt_s)
        rows = applied[a:b]
        t_l.append(float(np.count_nonzero(rows == 1)) * params.dt_s)
        t_o.append(float(np.count_nonzero(rows == 5)) * params.dt_s)

    return FerryMetrics(
        delivered_total_bits=float(tr[-1]),
        connection_delay_s=tau0,
        delay_to_rate_floor_s=t_star,
        rate_floor_bps=floor,
        loop_durations_s=tuple(loops),
        load_hover_durations_s=tuple(t_l),
        offload_hover_durations_s=tuple(t_o),
        completed_loops=len(loops),
    )


def run(params: FerryParams, engine: str = "auto") -> tuple[Trace, FerryMetrics]:
    """Simulate until ``t >= t_total``; deterministic for given params."""
    from .engine import get_kernel

    params = _snap(params)
    kernel = get_kernel(engine)
    cols = kernel(params)
    trace = _build_trace(params, cols)
    return trace, derive_metrics(trace, params)


def run_stationary(params: FerryParams, d_rg: float) -> tuple[Trace, FerryMetrics]:
    """Fixed-position relay baseline: constant end-to-end rate, empty buffer."""
    table = params.table
    se = e2e_se(table, params.big_d, d_rg)  # validates the placement box
    rate = params.n_streams * table.bandwidth_hz * se * table.cp_factor

    n = params.n_steps
    t = np.arange(n + 1, dtype=float) * params.dt_s
    tr = rate * t
    const = np.full(n + 1, rate)
    const[0] = 0.0
    trace = Trace(t_s=t, state=np.zeros(n + 1, dtype=np.int32),
                  x_m=np.full(n + 1, params.big_d - d_rg), d_rg_m=np.full(n + 1, d_rg),
                  buffered_bits=np.zeros(n + 1), delivered_bits=tr,
                  effective_rate_bps=np.where(t > 0, rate, 0.0),
                  load_bps=const, offload_bps=const, passthrough_bps=const,
                  loaded_bits=tr.copy())
    metrics = derive_metrics(trace, params)
    return trace, metrics
