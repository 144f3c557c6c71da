"""MMSE channel-estimation covariances.

For the scattered channel part with per-stream receive covariance ``R`` the
stacked (vectorized) covariance is block diagonal, ``Psi = I_K kron R``. The
estimator's whitening matrix inverts the observation covariance

    Phi^-1 = (sigma^2 / P_rx) I + zeta^2 R + zeta^2 sum_a (P_a / P_rx) R

per stream (streams are equidistant, so every diagonal block is identical).
The MMSE estimate of the scattered part then has covariance
``zeta^2 Psi Phi Psi`` and the estimation error has covariance
``zeta^2 Psi - zeta^2 Psi_hat``, which is what makes the decomposition
``zeta^2 Psi = zeta^2 Psi_hat + Psi_tilde`` exact and keeps every piece PSD.
"""

from __future__ import annotations

import numpy as np

from ..errors import SingularMatrix
from .channel import LinkConfig, build_correlation


def _estimation_blocks(cfg: LinkConfig, d: float):
    """Per-stream (N_r x N_r) blocks of Psi, Phi, Psi_hat, Psi_tilde."""
    zeta2 = cfg.rician.zeta ** 2
    r = build_correlation(cfg.rician.correlation_rho, cfg.n_rx)
    p0 = cfg.rx_power_w(d)
    p_intf = cfg.interferer_powers_w()
    ratio_sum = float(np.sum(p_intf) / p0) if len(p_intf) else 0.0

    phi_inv = (cfg.noise_power_w / p0) * np.eye(cfg.n_rx) + zeta2 * (1.0 + ratio_sum) * r
    try:
        phi = np.linalg.inv(phi_inv)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"observation covariance not invertible: {exc}") from exc
    if not np.all(np.isfinite(phi)):
        raise SingularMatrix("observation covariance inverse is not finite")

    psi_hat = zeta2 * (r @ phi @ r)
    psi_tilde = zeta2 * r - zeta2 * psi_hat
    return r, phi, psi_hat, psi_tilde, p0, p_intf


def estimation_covariances(cfg: LinkConfig, d: float):
    """Full stacked covariances (Psi, Phi, Psi_hat, Psi_tilde) at distance ``d``.

    Each is (n_tx * n_rx) square, Kronecker block diagonal. ``Psi_hat`` is the
    MMSE-estimate covariance scaled so that
    ``zeta^2 Psi = zeta^2 Psi_hat + Psi_tilde`` holds exactly.
    """
    r, phi, psi_hat, psi_tilde, _, _ = _estimation_blocks(cfg, d)
    eye = np.eye(cfg.n_tx)
    return (np.kron(eye, r), np.kron(eye, phi),
            np.kron(eye, psi_hat), np.kron(eye, psi_tilde))
