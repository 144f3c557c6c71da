"""Deterministic per-stream throughput approximation for matched-filter
combining with imperfect MMSE channel estimates.

The SINR is a ratio of expected signal power to expected interference-plus-
noise power. Both carry the same receive-combining normalization, so the
normalization cancels; it is still computed for traceability. The result is
in bps/Hz (capacity per transmit antenna).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigInvalid, ModeUnreachable
from .channel import LinkConfig
from .covariance import _estimation_blocks


def expected_throughput(cfg: LinkConfig, d: float, k_star: int = 1) -> float:
    """Approximate achievable rate of stream ``k_star`` (1-based), bps/Hz."""
    if not 1 <= k_star <= cfg.n_tx:
        raise ConfigInvalid(f"k_star must be in 1..{cfg.n_tx}")
    nu2 = cfg.rician.nu ** 2
    zeta2 = cfg.rician.zeta ** 2
    r, _, psi_hat, psi_tilde, p0, p_intf = _estimation_blocks(cfg, d)

    h_det = cfg.deterministic_component()
    hk = h_det[:, k_star - 1]
    b_star = np.outer(hk, hk.conj())

    est_cov = zeta2 * psi_hat          # covariance of the estimated scattered part
    a_star = nu2 * b_star + est_cov    # covariance of the full channel estimate

    # Combining normalization: mean energy of the estimate across all streams.
    norm = (nu2 * np.linalg.norm(h_det) ** 2
            + cfg.n_tx * np.trace(est_cov).real) / cfg.n_tx

    sig_tr = (nu2 * cfg.n_rx + np.trace(est_cov).real
              + np.trace(est_cov @ psi_tilde).real)
    p_signal = norm * p0 * sig_tr ** 2

    true_cov = zeta2 * r
    p_in = cfg.noise_power_w * (nu2 * cfg.n_rx + np.trace(est_cov).real)
    p_in += p0 * np.trace(psi_tilde @ (nu2 * b_star + true_cov)).real
    for k in range(cfg.n_tx):
        if k == k_star - 1:
            continue
        hj = h_det[:, k]
        p_in += p0 * (nu2 ** 2 * abs(np.vdot(hk, hj)) ** 2
                      + nu2 * np.vdot(hj, est_cov @ hj).real
                      + nu2 * zeta2 * np.vdot(hk, r @ hk).real
                      + zeta2 * np.trace(est_cov @ r).real)
    for idx, intf in enumerate(cfg.interferers):
        h_i = cfg.interferer_component(idx)
        p_i = p_intf[idx]
        for k in range(intf.n_tx):
            hj = h_i[:, k]
            p_in += p_i * (nu2 ** 2 * abs(np.vdot(hk, hj)) ** 2
                           + nu2 * np.vdot(hj, est_cov @ hj).real
                           + nu2 * zeta2 * np.vdot(hk, r @ hk).real
                           + zeta2 * np.trace(est_cov @ r).real)
    p_in *= norm

    if p_in <= 0:
        raise ConfigInvalid("interference-plus-noise power must be positive")
    return float(np.log2(1.0 + p_signal / p_in))


@dataclass(frozen=True)
class ThroughputCurve:
    """Per-stream capacity sampled over an ascending distance grid."""

    distances_m: np.ndarray
    per_ta_capacity: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances_m, dtype=float)
        c = np.asarray(self.per_ta_capacity, dtype=float)
        if d.shape != c.shape or d.ndim != 1 or len(d) == 0:
            raise ConfigInvalid("grid and capacity must be equal-length 1-d arrays")
        if np.any(np.diff(d) <= 0):
            raise ConfigInvalid("distance grid must be strictly ascending")
        if np.any(c < 0):
            raise ConfigInvalid("capacity must be non-negative")
        object.__setattr__(self, "distances_m", d)
        object.__setattr__(self, "per_ta_capacity", c)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["distance_m", "capacity_bps_hz"])
            for d, c in zip(self.distances_m, self.per_ta_capacity):
                writer.writerow([repr(float(d)), repr(float(c))])

    @classmethod
    def from_csv(cls, path) -> "ThroughputCurve":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["distance_m", "capacity_bps_hz"]:
                raise ConfigInvalid(f"unexpected curve CSV header {header!r}")
            rows = [(float(a), float(b)) for a, b in reader]
        d, c = zip(*rows)
        return cls(np.array(d), np.array(c))


def throughput_curve(cfg: LinkConfig, distances_m, k_star: int = 1) -> ThroughputCurve:
    """Evaluate the closed-form rate over a grid (shadowing disabled)."""
    grid = np.asarray(distances_m, dtype=float)
    caps = np.array([expected_throughput(cfg, float(d), k_star) for d in grid])
    return ThroughputCurve(grid, caps)


def derive_thresholds(curve: ThroughputCurve, mode_ses) -> list[float]:
    """Largest grid distance whose capacity still covers each mode's rate.

    ``mode_ses`` must be strictly increasing (lowest-rate mode first); the
    returned thresholds are ordered the same way and non-increasing. Raises
    ModeUnreachable when the highest rate exceeds the curve everywhere.
    """
    ses = list(mode_ses)
    if any(b <= a for a, b in zip(ses, ses[1:])):
        raise ConfigInvalid("mode spectral efficiencies must be strictly increasing")
    caps = curve.per_ta_capacity
    thresholds = []
    for se in ses:
        idx = np.nonzero(caps >= se)[0]
        if len(idx) == 0:
            raise ModeUnreachable(f"mode rate {se} bps/Hz exceeds the entire curve")
        thresholds.append(float(curve.distances_m[idx[-1]]))
    return thresholds
