"""Distance-switched adaptive coding and modulation (ACM).

A rate table maps the distance between a relay aircraft and its peer to a
(modulation, code rate) mode. Mode intervals are half-open: mode ``q`` serves
``threshold[q] <= d < threshold[q-1]``, so a distance exactly on a switching
threshold gets the lower-rate mode, and any distance at or beyond the outermost
threshold gets mode 0 (no link). Distances below the innermost threshold are a
flight-safety violation and are rejected rather than clamped.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import ConfigInvalid, DistanceBelowMinimum


@dataclass(frozen=True)
class AcmMode:
    """One coding/modulation mode of the distance-switched table."""

    index: int
    modulation: str
    code_rate: float
    bits_per_symbol: int
    spectral_efficiency: float  # bps/Hz, includes any fixed framing overhead
    switch_threshold_m: float


@dataclass(frozen=True)
class AcmTable:
    """Ordered mode list (index 0 = out-of-range) plus bandwidth bookkeeping.

    ``spectral_efficiency`` is authoritative for data rates; the stored code
    rate and bits/symbol are descriptive (the shipped table's efficiencies
    embed an OFDM cyclic-prefix overhead of roughly 15/16, so the product
    ``code_rate * bits_per_symbol`` is an upper bound, not an identity).
    """

    modes: tuple[AcmMode, ...]
    bandwidth_hz: float = 6e6
    cp_factor: float = 1.0  # extra N_c/(N_c+N_cp) discount; 1.0 = none

    def __post_init__(self):
        if len(self.modes) < 2:
            raise ConfigInvalid("need mode 0 plus at least one positive-rate mode")
        for q, m in enumerate(self.modes):
            if m.index != q:
                raise ConfigInvalid(f"mode list must be indexed 0..Q, got {m.index} at {q}")
        if self.modes[0].spectral_efficiency != 0.0:
            raise ConfigInvalid("mode 0 must have zero spectral efficiency")
        thr = [m.switch_threshold_m for m in self.modes]
        if any(t2 >= t1 for t1, t2 in zip(thr, thr[1:])) or thr[-1] <= 0:
            raise ConfigInvalid("switch thresholds must be strictly decreasing and positive")
        ses = [m.spectral_efficiency for m in self.modes[1:]]
        if any(s2 <= s1 for s1, s2 in zip(ses, ses[1:])) or ses[0] <= 0:
            raise ConfigInvalid("spectral efficiency must be strictly increasing for modes >= 1")
        for m in self.modes[1:]:
            if m.spectral_efficiency > m.code_rate * m.bits_per_symbol + 1e-3:
                raise ConfigInvalid(
                    f"mode {m.index}: spectral efficiency {m.spectral_efficiency} exceeds "
                    f"code_rate * bits_per_symbol = {m.code_rate * m.bits_per_symbol}"
                )
        if not 0.0 < self.cp_factor <= 1.0:
            raise ConfigInvalid("cp_factor must be in (0, 1]")
        if self.bandwidth_hz <= 0:
            raise ConfigInvalid("bandwidth must be positive")

    @property
    def n_modes(self) -> int:
        """Q: highest positive-rate mode index."""
        return len(self.modes) - 1

    @property
    def d_min(self) -> float:
        """Minimum safe separation (innermost threshold)."""
        return self.modes[-1].switch_threshold_m

    @property
    def d_max(self) -> float:
        """Maximum communication distance (outermost threshold)."""
        return self.modes[0].switch_threshold_m


# Shipped default: 60 GHz aeronautical profile, 7 positive-rate modes.
_DEFAULT_MODES = (
    AcmMode(0, "none", 0.0, 0, 0.0, 8000.0),
    AcmMode(1, "BPSK", 0.488, 1, 0.459, 6000.0),
    AcmMode(2, "BPSK", 0.780, 1, 0.731, 4500.0),
    AcmMode(3, "QPSK", 0.533, 2, 1.000, 3500.0),
    AcmMode(4, "QPSK", 0.706, 2, 1.322, 2500.0),
    AcmMode(5, "8-QAM", 0.642, 3, 1.809, 1700.0),
    AcmMode(6, "8-QAM", 0.780, 3, 2.194, 1000.0),
    AcmMode(7, "16-QAM", 0.708, 4, 2.665, 500.0),
)


def default_table(bandwidth_hz: float = 6e6, cp_factor: float = 1.0) -> AcmTable:
    """The embedded default rate table."""
    return AcmTable(modes=_DEFAULT_MODES, bandwidth_hz=bandwidth_hz, cp_factor=cp_factor)


def select_mode(table: AcmTable, d: float) -> int:
    """Mode index for distance ``d`` (meters).

    Returns 0 iff ``d >= table.d_max``; otherwise the unique q with
    ``threshold[q] <= d < threshold[q-1]``. Raises DistanceBelowMinimum for
    ``d < table.d_min``.
    """
    if d < table.d_min:
        raise DistanceBelowMinimum(
            f"distance {d} m is below the minimum safe separation {table.d_min} m"
        )
    if d >= table.d_max:
        return 0
    # Thresholds decrease with the index, so the first mode whose lower
    # threshold is reached is the one whose half-open interval contains d.
    for mode in table.modes[1:]:
        if d >= mode.switch_threshold_m:
            return mode.index
    raise AssertionError("unreachable: d >= d_min guarantees a match")


def per_ta_rate(table: AcmTable, d: float) -> float:
    """Data rate of a single transmit antenna at distance ``d``, in bit/s."""
    q = select_mode(table, d)
    return table.bandwidth_hz * table.modes[q].spectral_efficiency * table.cp_factor


def aggregate_rate(table: AcmTable, d: float, n_streams: int) -> float:
    """Aggregate rate of ``n_streams`` simultaneous transmit antennas, bit/s."""
    if n_streams < 1:
        raise ConfigInvalid("n_streams must be >= 1")
    return n_streams * per_ta_rate(table, d)


def mode_rate_profile(table: AcmTable, n_streams: int = 1):
    """(descending thresholds, aggregate rate per mode) as plain lists.

    Convenience for the simulation kernels: ``rates[q]`` is the aggregate rate
    of mode ``q`` and ``thresholds[q]`` its lower switching distance.
    """
    thresholds = [m.switch_threshold_m for m in table.modes]
    rates = [
        n_streams * table.bandwidth_hz * m.spectral_efficiency * table.cp_factor
        for m in table.modes
    ]
    return thresholds, rates


CSV_COLUMNS = ("q", "modulation", "code_rate", "bits_per_symbol",
               "spectral_efficiency", "threshold_m")


def dump_table_csv(table: AcmTable, path) -> None:
    """Write the table in the documented CSV layout."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for m in table.modes:
            writer.writerow([m.index, m.modulation, repr(m.code_rate),
                             m.bits_per_symbol, repr(m.spectral_efficiency),
                             repr(m.switch_threshold_m)])


def load_table_csv(path, bandwidth_hz: float = 6e6, cp_factor: float = 1.0) -> AcmTable:
    """Load a table from the documented CSV layout; validates on construction."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_COLUMNS:
            raise ConfigInvalid(f"unexpected ACM CSV header {header!r}")
        modes = []
        for row in reader:
            if not row:
                continue
            modes.append(AcmMode(
                index=int(row[0]),
                modulation=row[1],
                code_rate=float(row[2]),
                bits_per_symbol=int(row[3]),
                spectral_efficiency=float(row[4]),
                switch_threshold_m=float(row[5]),
            ))
    return AcmTable(modes=tuple(modes), bandwidth_hz=bandwidth_hz, cp_factor=cp_factor)
