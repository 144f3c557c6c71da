import numpy as np
import pytest

from ferrylink.errors import (
    ConfigInvalid,
    DistanceBelowReference,
    ModeUnreachable,
)
from ferrylink.linkmodel import (
    Interferer,
    LinkConfig,
    LosGeometry,
    PathLossParams,
    RicianParams,
    ThroughputCurve,
    build_channel_sample,
    build_correlation,
    derive_thresholds,
    estimation_covariances,
    expected_throughput,
    friis_reference_db,
    path_loss_db,
    received_power,
    throughput_curve,
)

from _oracles import mc_error_covariance


def desk_cfg(n_rx=8, n_tx=2, rho=0.5, k_db=5.0, noise=1e-13, interferers=(),
             seed=0, angles=None):
    los = LosGeometry(angles_deg=angles) if angles else LosGeometry()
    return LinkConfig(n_rx=n_rx, n_tx=n_tx, carrier_hz=60e9,
                      path_loss=PathLossParams.friis(60e9),
                      rician=RicianParams(k_db, rho), tx_power_w=0.078,
                      noise_power_w=noise, interferers=tuple(interferers),
                      los=los, seed=seed)


class TestPathLoss:
    def test_reference_distance_gives_alpha(self):
        p = PathLossParams(alpha_db=68.0, slope=2.0)
        assert path_loss_db(p, 1.0) == pytest.approx(68.0)

    def test_decade_adds_twenty_db_at_slope_two(self):
        p = PathLossParams(alpha_db=68.0, slope=2.0)
        assert path_loss_db(p, 10.0) == pytest.approx(88.0)

    def test_friis_sixty_ghz_reference(self):
        # Free-space oracle: 20*log10(4*pi*d0*f/c).
        assert friis_reference_db(60e9, 1.0) == pytest.approx(68.0, abs=0.05)

    def test_received_power_identities(self):
        p0 = PathLossParams(alpha_db=0.0, slope=2.0)
        assert received_power(p0, 2.5, 1.0) == pytest.approx(2.5)
        p30 = PathLossParams(alpha_db=30.0, slope=2.0)
        assert received_power(p30, 1.0, 1.0) == pytest.approx(1e-3)

    def test_composed_link_budget(self):
        p = PathLossParams.friis(60e9)
        expected = 78e-3 * 10 ** (-0.1 * (friis_reference_db(60e9) + 20 * np.log10(1000.0)))
        assert received_power(p, 78e-3, 1000.0) == pytest.approx(expected, rel=1e-12)

    def test_shadow_draw_scales_sigma(self):
        p = PathLossParams(alpha_db=68.0, slope=2.0, sigma_shadow_db=4.0)
        assert path_loss_db(p, 10.0, shadow_draw=1.5) == pytest.approx(88.0 + 6.0)

    def test_below_reference_rejected(self):
        p = PathLossParams(alpha_db=68.0, slope=2.0, reference_m=1.0)
        with pytest.raises(DistanceBelowReference):
            path_loss_db(p, 0.5)

    def test_strictly_decreasing_received_power(self):
        p = PathLossParams.friis(60e9)
        dists = np.linspace(10.0, 5000.0, 64)
        pw = [received_power(p, 1.0, float(d)) for d in dists]
        assert all(a > b for a, b in zip(pw, pw[1:]))


class TestCorrelation:
    def test_rho_zero_identity(self):
        assert np.array_equal(build_correlation(0.0, 5), np.eye(5))

    def test_rho_half_two_antennas(self):
        assert np.allclose(build_correlation(0.5, 2), [[1.0, 0.5], [0.5, 1.0]])

    def test_high_rho_positive_definite(self):
        eigs = np.linalg.eigvalsh(build_correlation(0.9, 8))
        assert eigs.min() > 0

    def test_rho_one_rejected(self):
        with pytest.raises(ConfigInvalid):
            build_correlation(1.0, 4)


class TestRicianFactors:
    def test_five_db_values(self):
        r = RicianParams(5.0)
        assert r.nu == pytest.approx(0.8716, abs=2e-4)
        assert r.zeta == pytest.approx(0.2403, abs=2e-4)

    def test_normalized_convention(self):
        r = RicianParams(5.0, normalized=True)
        assert r.nu ** 2 + r.zeta ** 2 == pytest.approx(1.0)


class TestChannelSample:
    def test_pure_los_limit(self):
        cfg = desk_cfg(k_db=400.0, rho=0.0)
        h = build_channel_sample(cfg, seed=1)
        assert np.allclose(h, cfg.deterministic_component(), atol=1e-9)

    def test_rayleigh_moments(self):
        # zeta = 1 and nu = 0 at K = 0 (-inf dB); entries should be CN(0, 1).
        cfg = desk_cfg(n_rx=100, n_tx=50, k_db=float("-inf"), rho=0.0)
        h = build_channel_sample(cfg, seed=2)
        flat = h.ravel()
        assert len(flat) >= 1e3
        samples = np.concatenate([
            build_channel_sample(cfg, seed=s).ravel() for s in range(25)
        ])
        assert len(samples) >= 1e5
        assert abs(np.mean(samples)) < 0.01
        assert np.var(samples) == pytest.approx(1.0, rel=0.01)

    def test_seed_reproducible(self):
        cfg = desk_cfg()
        assert np.array_equal(build_channel_sample(cfg, 7), build_channel_sample(cfg, 7))
        assert not np.array_equal(build_channel_sample(cfg, 7), build_channel_sample(cfg, 8))


class TestEstimationCovariances:
    def test_decomposition_identity(self):
        cfg = desk_cfg(interferers=[Interferer(4000.0, 2)])
        psi, _, psi_hat, psi_tilde = estimation_covariances(cfg, 2000.0)
        z2 = cfg.rician.zeta ** 2
        lhs = z2 * psi
        rhs = z2 * psi_hat + psi_tilde
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(lhs)

    def test_zero_noise_perfect_estimation(self):
        cfg = desk_cfg(noise=0.0)
        psi, _, psi_hat, psi_tilde = estimation_covariances(cfg, 2000.0)
        assert np.linalg.norm(psi_tilde) < 1e-10
        assert np.allclose(psi_hat, psi)

    def test_huge_noise_kills_estimate(self):
        cfg = desk_cfg(noise=1e6)
        psi, _, psi_hat, psi_tilde = estimation_covariances(cfg, 2000.0)
        z2 = cfg.rician.zeta ** 2
        assert np.linalg.norm(psi_hat) < 1e-9
        assert np.allclose(psi_tilde, z2 * psi, atol=1e-9)

    def test_matches_monte_carlo_error_covariance(self):
        cfg = desk_cfg(n_rx=4, n_tx=2, rho=0.5, noise=2e-13,
                       interferers=[Interferer(4000.0, 2)], seed=5)
        d = 2000.0
        _, _, _, psi_tilde = estimation_covariances(cfg, d)
        block = psi_tilde[:4, :4]
        sample = mc_error_covariance(cfg, d, trials=20000, seed=42)
        rel = np.linalg.norm(sample - block) / np.linalg.norm(block)
        assert rel < 0.05


class TestExpectedThroughput:
    def test_noise_dominates_to_zero(self):
        cfg = desk_cfg(noise=1e3)
        assert expected_throughput(cfg, 2000.0, 1) < 1e-6

    def test_matched_filter_identity(self):
        # Pure LoS, orthogonal steering columns, no interference: the SINR
        # collapses to rx_power * n_rx / noise.
        angles = (0.0, float(np.rad2deg(np.arcsin(2.0 / 16.0))))
        cfg = desk_cfg(n_rx=16, n_tx=2, rho=0.0, k_db=300.0, noise=1e-13,
                       angles=angles)
        d = 1000.0
        want = np.log2(1.0 + cfg.rx_power_w(d) * 16 / 1e-13)
        assert expected_throughput(cfg, d, 1) == pytest.approx(want, rel=1e-9)

    def test_scale_invariance(self):
        cfg = desk_cfg(interferers=[Interferer(3000.0, 2)])
        base = expected_throughput(cfg, 2000.0, 1)
        scaled_cfg = desk_cfg(interferers=[Interferer(3000.0, 2)])
        scaled_cfg = LinkConfig(
            n_rx=cfg.n_rx, n_tx=cfg.n_tx, carrier_hz=cfg.carrier_hz,
            path_loss=cfg.path_loss, rician=cfg.rician,
            tx_power_w=cfg.tx_power_w * 37.0, noise_power_w=cfg.noise_power_w * 37.0,
            interferers=cfg.interferers, los=cfg.los, seed=cfg.seed)
        assert expected_throughput(scaled_cfg, 2000.0, 1) == pytest.approx(base, rel=1e-9)

    def test_k_star_bounds_checked(self):
        cfg = desk_cfg()
        with pytest.raises(ConfigInvalid):
            expected_throughput(cfg, 2000.0, 0)
        with pytest.raises(ConfigInvalid):
            expected_throughput(cfg, 2000.0, 3)


class TestThroughputCurve:
    def test_single_point_grid(self):
        cfg = desk_cfg()
        curve = throughput_curve(cfg, [1500.0])
        assert len(curve.distances_m) == 1
        assert curve.per_ta_capacity[0] == pytest.approx(
            expected_throughput(cfg, 1500.0, 1))

    def test_monotone_non_increasing(self):
        cfg = desk_cfg(interferers=[Interferer(5000.0, 2)])
        curve = throughput_curve(cfg, np.linspace(500.0, 8000.0, 40))
        assert np.all(np.diff(curve.per_ta_capacity) <= 1e-12)

    def test_more_power_raises_curve(self):
        grid = np.linspace(500.0, 6000.0, 12)
        lo = throughput_curve(desk_cfg(), grid)
        hi_cfg = desk_cfg()
        hi_cfg = LinkConfig(n_rx=hi_cfg.n_rx, n_tx=hi_cfg.n_tx,
                            carrier_hz=hi_cfg.carrier_hz, path_loss=hi_cfg.path_loss,
                            rician=hi_cfg.rician, tx_power_w=hi_cfg.tx_power_w * 2,
                            noise_power_w=hi_cfg.noise_power_w,
                            interferers=hi_cfg.interferers, los=hi_cfg.los,
                            seed=hi_cfg.seed)
        hi = throughput_curve(hi_cfg, grid)
        assert np.all(hi.per_ta_capacity > lo.per_ta_capacity)

    def test_csv_round_trip(self, tmp_path):
        curve = ThroughputCurve(np.array([1.0, 2.0]), np.array([3.0, 0.5]))
        path = tmp_path / "curve.csv"
        curve.to_csv(path)
        loaded = ThroughputCurve.from_csv(path)
        assert np.array_equal(loaded.distances_m, curve.distances_m)
        assert np.array_equal(loaded.per_ta_capacity, curve.per_ta_capacity)


class TestDeriveThresholds:
    def test_constant_curve_gives_last_point(self):
        curve = ThroughputCurve(np.array([1.0, 2.0, 3.0]), np.array([5.0, 5.0, 5.0]))
        assert derive_thresholds(curve, [0.5, 1.0, 2.0]) == [3.0, 3.0, 3.0]

    def test_exact_tie_included(self):
        curve = ThroughputCurve(np.array([1.0, 2.0, 3.0]), np.array([3.0, 1.0, 0.2]))
        assert derive_thresholds(curve, [1.0]) == [2.0]

    def test_staircase_recovers_table(self):
        from ferrylink.acm import default_table

        table = default_table()
        ses = [m.spectral_efficiency for m in table.modes[1:]]
        thr = [m.switch_threshold_m for m in table.modes]
        grid = np.arange(500.0, 8001.0, 0.5)
        caps = np.zeros_like(grid)
        for q in range(1, len(thr)):
            caps[(grid >= thr[q]) & (grid < thr[q - 1])] = ses[q - 1]
        # Mode q's SE is supported on [thr_q, thr_{q-1}), so the largest grid
        # point still supporting it sits one grid step inside thr_{q-1}.
        curve = ThroughputCurve(grid, caps)
        got = derive_thresholds(curve, ses)
        want = [thr[q - 1] - 0.5 for q in range(1, len(thr))]
        assert got == want

    def test_unreachable_mode(self):
        curve = ThroughputCurve(np.array([1.0, 2.0]), np.array([0.4, 0.1]))
        with pytest.raises(ModeUnreachable):
            derive_thresholds(curve, [0.5])
