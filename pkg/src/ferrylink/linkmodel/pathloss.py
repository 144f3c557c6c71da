"""Log-distance path loss with optional log-normal shadowing."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ConfigInvalid, DistanceBelowReference

SPEED_OF_LIGHT = 299_792_458.0


def friis_reference_db(carrier_hz: float, reference_m: float = 1.0) -> float:
    """Free-space loss at the reference distance, 20*log10(4*pi*d0*f/c)."""
    return 20.0 * math.log10(4.0 * math.pi * reference_m * carrier_hz / SPEED_OF_LIGHT)


@dataclass(frozen=True)
class PathLossParams:
    """Reference loss ``alpha_db`` plus slope; shadowing is a dB sigma."""

    alpha_db: float
    slope: float = 2.0
    sigma_shadow_db: float = 0.0
    reference_m: float = 1.0

    def __post_init__(self):
        if self.slope <= 0:
            raise ConfigInvalid("path-loss slope must be positive")
        if self.sigma_shadow_db < 0:
            raise ConfigInvalid("shadowing sigma must be >= 0")
        if self.reference_m <= 0:
            raise ConfigInvalid("reference distance must be positive")

    @classmethod
    def friis(cls, carrier_hz: float, slope: float = 2.0,
              sigma_shadow_db: float = 0.0, reference_m: float = 1.0):
        """Reference loss from the free-space model at ``reference_m``."""
        return cls(friis_reference_db(carrier_hz, reference_m), slope,
                   sigma_shadow_db, reference_m)


def path_loss_db(params: PathLossParams, d: float, shadow_draw: float | None = None) -> float:
    """Path loss in dB at distance ``d`` meters.

    ``shadow_draw`` is a standard-normal draw scaled by the configured sigma;
    omitting it evaluates the deterministic (median) loss.
    """
    if d < params.reference_m:
        raise DistanceBelowReference(
            f"distance {d} m is below the reference distance {params.reference_m} m"
        )
    loss = params.alpha_db + 10.0 * params.slope * math.log10(d / params.reference_m)
    if shadow_draw is not None:
        loss += shadow_draw * params.sigma_shadow_db
    return loss


def received_power(params: PathLossParams, tx_power_w: float, d: float,
                   shadow_draw: float | None = None) -> float:
    """Received power in watts: tx * 10^(-0.1 * loss_dB)."""
    return tx_power_w * 10.0 ** (-0.1 * path_loss_db(params, d, shadow_draw))
