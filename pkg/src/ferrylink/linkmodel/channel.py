"""Correlated Rician MIMO channel construction.

The channel is ``nu * H_det + zeta * R^(1/2) G`` where ``H_det`` holds
unit-modulus steering-vector columns (one azimuth per transmit stream), ``R``
is the receive-side exponential correlation matrix and ``G`` has i.i.d.
standard complex Gaussian entries. ``nu`` and ``zeta`` derive from the Rician
factor; by default ``zeta = 1/(1+K)`` as used by the throughput analysis, with
an opt-in power-normalized convention ``zeta = sqrt(1/(1+K))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigInvalid
from .pathloss import PathLossParams, received_power


@dataclass(frozen=True)
class RicianParams:
    k_factor_db: float
    correlation_rho: float = 0.0
    normalized: bool = False  # True: zeta = sqrt(1/(1+K)) instead of 1/(1+K)

    def __post_init__(self):
        if not 0.0 <= self.correlation_rho < 1.0:
            raise ConfigInvalid("correlation rho must be in [0, 1)")

    @property
    def k_linear(self) -> float:
        return 10.0 ** (self.k_factor_db / 10.0)

    @property
    def nu(self) -> float:
        k = self.k_linear
        return math.sqrt(k / (1.0 + k))

    @property
    def zeta(self) -> float:
        k = self.k_linear
        return math.sqrt(1.0 / (1.0 + k)) if self.normalized else 1.0 / (1.0 + k)


@dataclass(frozen=True)
class LosGeometry:
    """Linear receive array geometry for the deterministic component.

    Azimuths are either given explicitly (degrees) or drawn once, uniformly in
    ``[-angle_spread_deg/2, +angle_spread_deg/2]``, from the owning config's
    seed.
    """

    spacing_wavelengths: float = 0.5
    angle_spread_deg: float = 120.0
    angles_deg: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Interferer:
    """A co-channel transmitter group at a fixed distance."""

    distance_m: float
    n_tx: int = 1


@dataclass(frozen=True)
class LinkConfig:
    """Everything needed to evaluate one link's SINR at a distance."""

    n_rx: int
    n_tx: int
    carrier_hz: float
    path_loss: PathLossParams
    rician: RicianParams
    tx_power_w: float
    noise_power_w: float
    interferers: tuple[Interferer, ...] = ()
    los: LosGeometry = field(default_factory=LosGeometry)
    seed: int = 0

    def __post_init__(self):
        if self.n_tx < 1 or self.n_rx < self.n_tx:
            raise ConfigInvalid("need 1 <= n_tx <= n_rx")
        if self.tx_power_w <= 0 or self.noise_power_w < 0:
            raise ConfigInvalid("powers must be positive (noise may be 0 for limits)")
        if self.los.angles_deg is not None and len(self.los.angles_deg) != self.n_tx:
            raise ConfigInvalid("explicit angle list must have n_tx entries")

    def stream_angles_deg(self) -> np.ndarray:
        """Azimuths of the desired streams (explicit or seed-drawn)."""
        if self.los.angles_deg is not None:
            return np.asarray(self.los.angles_deg, dtype=float)
        rng = np.random.default_rng(self.seed)
        half = self.los.angle_spread_deg / 2.0
        return rng.uniform(-half, half, size=self.n_tx)

    def interferer_angles_deg(self, index: int) -> np.ndarray:
        """Azimuths of one interferer group, re-drawn per config seed."""
        rng = np.random.default_rng((self.seed, 1 + index))
        half = self.los.angle_spread_deg / 2.0
        return rng.uniform(-half, half, size=self.interferers[index].n_tx)

    def deterministic_component(self) -> np.ndarray:
        """Unit-modulus steering matrix of the desired streams (n_rx x n_tx)."""
        return steering_matrix(self.n_rx, self.stream_angles_deg(),
                               self.los.spacing_wavelengths)

    def interferer_component(self, index: int) -> np.ndarray:
        return steering_matrix(self.n_rx, self.interferer_angles_deg(index),
                               self.los.spacing_wavelengths)

    def rx_power_w(self, d: float) -> float:
        """Received power of one desired stream at distance ``d``."""
        return received_power(self.path_loss, self.tx_power_w, d)

    def interferer_powers_w(self) -> np.ndarray:
        return np.array([received_power(self.path_loss, self.tx_power_w, i.distance_m)
                         for i in self.interferers])


def steering_matrix(n_rx: int, angles_deg, spacing_wavelengths: float = 0.5) -> np.ndarray:
    """Columns exp(-j*2*pi*spacing*i*sin(angle)), one per stream."""
    angles = np.deg2rad(np.asarray(angles_deg, dtype=float))
    idx = np.arange(n_rx)[:, None]
    return np.exp(-2j * np.pi * spacing_wavelengths * idx * np.sin(angles)[None, :])


def build_correlation(rho: float, n: int) -> np.ndarray:
    """Exponential correlation model R[i, j] = rho^|i-j|."""
    if not 0.0 <= rho < 1.0:
        raise ConfigInvalid("correlation rho must be in [0, 1)")
    idx = np.arange(n)
    return rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def correlation_sqrt(rho: float, n: int) -> np.ndarray:
    """Symmetric PSD square root of the exponential correlation matrix."""
    r = build_correlation(rho, n)
    vals, vecs = np.linalg.eigh(r)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def build_channel_sample(cfg: LinkConfig, seed) -> np.ndarray:
    """One correlated Rician channel draw; deterministic given ``seed``."""
    rng = np.random.default_rng(seed)
    g = (rng.standard_normal((cfg.n_rx, cfg.n_tx))
         + 1j * rng.standard_normal((cfg.n_rx, cfg.n_tx))) / math.sqrt(2.0)
    scattered = correlation_sqrt(cfg.rician.correlation_rho, cfg.n_rx) @ g
    return cfg.rician.nu * cfg.deterministic_component() + cfg.rician.zeta * scattered
