"""Ferry-loop decision variables, scenario constants and simulator state."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

from ..acm import AcmTable, default_table, mode_rate_profile
from ..errors import ConfigInvalid


class LatticeSnapWarning(UserWarning):
    """Hover point moved onto the per-step movement lattice."""


@dataclass(frozen=True)
class FerryParams:
    """Decision variables plus scenario constants for one ferry run.

    Distances: ``d_load`` is the hover point near the swarm (relay-to-swarm
    distance), ``d_offload`` the hover point near the station (relay-to-station
    distance), ``big_d`` the swarm-to-station distance. The relay position
    ``x`` is measured from the swarm, so the station-side distance is
    ``big_d - x``.
    """

    big_d: float                       # end-to-end distance, m
    d_load: float
    d_offload: float
    alpha: float                       # departure threshold fraction (load)
    beta: float                        # departure threshold fraction (offload)
    buffer_bits: float
    n_streams: int = 8
    speed_mps: float = 50.0
    dt_s: float = 1.0
    t_total_s: float = 3000.0
    rate_floor_bps: float = 0.0        # required effective rate for the delay metric
    passthrough: bool = True
    table: AcmTable = None

    def __post_init__(self):
        if self.table is None:
            object.__setattr__(self, "table", default_table())
        t = self.table
        if not t.d_min <= self.d_load <= t.d_max:
            raise ConfigInvalid(
                f"d_load = {self.d_load} m outside [{t.d_min}, {t.d_max}] m")
        if not t.d_min <= self.d_offload <= t.d_max:
            raise ConfigInvalid(
                f"d_offload = {self.d_offload} m outside [{t.d_min}, {t.d_max}] m")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigInvalid("alpha must be in (0, 1]")
        if not 0.0 <= self.beta < 1.0:
            raise ConfigInvalid("beta must be in [0, 1)")
        if self.beta >= self.alpha:
            raise ConfigInvalid("beta must be strictly below alpha")
        if self.buffer_bits <= 0:
            raise ConfigInvalid("buffer size must be positive")
        if self.n_streams < 1:
            raise ConfigInvalid("n_streams must be >= 1")
        if self.speed_mps <= 0 or self.dt_s <= 0:
            raise ConfigInvalid("speed and dt must be positive")
        if self.t_total_s < self.dt_s:
            raise ConfigInvalid("t_total must cover at least one step")
        if self.rate_floor_bps < 0:
            raise ConfigInvalid("rate floor must be >= 0")
        if self.big_d < self.d_load + self.d_offload - 1e-6:
            raise ConfigInvalid(
                f"D = {self.big_d} m is shorter than d_load + d_offload = "
                f"{self.d_load + self.d_offload} m")

    @property
    def x_offload(self) -> float:
        """Offload hover position in swarm coordinates."""
        return self.big_d - self.d_offload

    def snapped(self) -> "FerryParams":
        """Snap the offload hover point onto the per-step movement lattice.

        The relay moves by exactly ``speed * dt`` per step starting from
        ``d_load``, so the offload point must sit on that lattice; the nearest
        admissible point is chosen (warning when the move exceeds 1 mm).
        """
        step = self.speed_mps * self.dt_s
        span = self.big_d - self.d_load
        n_lo = max(0, math.ceil((span - self.table.d_max) / step - 1e-9))
        n_hi = math.floor((span - self.table.d_min) / step + 1e-9)
        if n_lo > n_hi:
            raise ConfigInvalid(
                f"no lattice point with spacing {step} m lands inside the "
                f"offload box [{self.table.d_min}, {self.table.d_max}] m")
        n = min(max(round((self.x_offload - self.d_load) / step), n_lo), n_hi)
        new_off = self.big_d - (self.d_load + n * step)
        if abs(new_off - self.d_offload) <= 1e-9:
            return self
        if abs(new_off - self.d_offload) > 1e-3:
            warnings.warn(
                f"offload point snapped from {self.d_offload} m to {new_off} m "
                f"to land on the {step} m movement lattice",
                LatticeSnapWarning, stacklevel=2)
        return replace(self, d_offload=new_off)

    def rate_profile(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """(descending thresholds, aggregate mode rates) for the kernels."""
        return _cached_profile(self.table, self.n_streams)

    @property
    def n_steps(self) -> int:
        return math.ceil(self.t_total_s / self.dt_s - 1e-12)


@lru_cache(maxsize=64)
def _cached_profile(table: AcmTable, n_streams: int):
    thresholds, rates = mode_rate_profile(table, n_streams)
    return tuple(thresholds), tuple(rates)


# States of the loop: 1 load-hover, 2 fly-out loading, 3 fly-out dark,
# 4 fly-out offloading, 5 offload-hover, 6 fly-back offloading,
# 7 fly-back dark, 8 fly-back loading.
LOADING_STATES = (1, 2, 8)
OFFLOADING_STATES = (4, 5, 6)


@dataclass(frozen=True)
class SimState:
    """Instantaneous simulator state (one trace row)."""

    step_index: int
    x: float                 # relay position, m from the swarm
    state_id: int
    buffered_bits: float
    delivered_bits: float
    loaded_bits: float       # everything taken from the swarm so far
    loop_index: int
    hover_remaining: int     # steps left in the current hover; -1 = unbounded
    load_flow_bps: float = 0.0
    offload_flow_bps: float = 0.0
    passthrough_bps: float = 0.0

    def t(self, params: FerryParams) -> float:
        return self.step_index * params.dt_s


def _rate_at(thresholds, rates, d: float) -> float:
    if d >= thresholds[0]:
        return 0.0
    for q in range(1, len(thresholds)):
        if d >= thresholds[q]:
            return rates[q]
    return rates[-1]  # below safety floor cannot occur for validated params


_HOVER_CAP = 1e15  # beyond any run length; treated as unbounded


def _hover_steps(amount_bits: float, rate_bps: float, dt_s: float) -> int:
    """Floor duration in steps; -1 when the hover can never finish."""
    if amount_bits <= 0.0:
        return 0
    if rate_bps <= 0.0:
        return -1
    ratio = amount_bits / (rate_bps * dt_s)
    if ratio >= _HOVER_CAP:
        return -1
    return int(math.floor(ratio))


_ARRIVE_EPS = 1e-9


def resolve_entry(state_id: int, x: float, buffered: float, loop_index: int,
                  params: FerryParams):
    """Cascade state entries until one with work to do is reached.

    Returns (state_id, hover_remaining, loop_index). Zero-duration states are
    skipped entirely, which is what makes the loop well defined when the two
    hops' coverage regions overlap (the dark / gap states collapse).
    """
    thresholds, rates = params.rate_profile()
    d_max = params.table.d_max
    x_off = params.big_d - params.d_offload
    seen_load_hover = False
    for _ in range(32):
        if state_id == 1:
            rate = _rate_at(thresholds, rates, params.d_load)
            hover = _hover_steps(params.alpha * params.buffer_bits - buffered,
                                 rate, params.dt_s)
            if seen_load_hover and hover == 0:
                hover = 1  # degenerate zero-length cycle; force progress
            if hover != 0:
                return 1, hover, loop_index
            seen_load_hover = True
            state_id = 2
        elif state_id == 2:
            if x >= x_off - _ARRIVE_EPS:
                state_id = 5
            elif x >= d_max:
                state_id = 3
            else:
                return 2, 0, loop_index
        elif state_id == 3:
            if params.big_d - x <= d_max:
                state_id = 4
            else:
                return 3, 0, loop_index
        elif state_id == 4:
            if x >= x_off - _ARRIVE_EPS:
                state_id = 5
            else:
                return 4, 0, loop_index
        elif state_id == 5:
            rate = _rate_at(thresholds, rates, params.d_offload)
            hover = _hover_steps(buffered - params.beta * params.buffer_bits,
                                 rate, params.dt_s)
            if hover != 0:
                return 5, hover, loop_index
            state_id = 6
        elif state_id == 6:
            if x <= params.d_load + _ARRIVE_EPS:
                state_id = 1
                loop_index += 1
            elif params.big_d - x >= d_max:
                state_id = 7
            else:
                return 6, 0, loop_index
        elif state_id == 7:
            if x <= d_max:
                state_id = 8
            else:
                return 7, 0, loop_index
        elif state_id == 8:
            if x <= params.d_load + _ARRIVE_EPS:
                state_id = 1
                loop_index += 1
            else:
                return 8, 0, loop_index
        else:
            raise ConfigInvalid(f"unknown state {state_id}")
    raise AssertionError("state entry cascade did not settle")


def initial_state(params: FerryParams) -> SimState:
    """Start of a run: empty buffer, hovering at the loading point."""
    params = params.snapped()
    state_id, hover, loop = resolve_entry(1, params.d_load, 0.0, 0, params)
    return SimState(step_index=0, x=params.d_load, state_id=state_id,
                    buffered_bits=0.0, delivered_bits=0.0, loaded_bits=0.0,
                    loop_index=loop, hover_remaining=hover)
