import numpy as np
import pytest

from mixcomm import (
    ChannelMatrix,
    FeasibleBox,
    GaussianNoise,
    RngStream,
    SqrtChannelNoise,
    SystemDescription,
    default_system,
    sample_observation,
    scale_noise,
    sensor_preset,
)
from mixcomm.errors import DimensionMismatch, DomainError, InvalidSpec
from mixcomm.sensors import TGS_PRESET_NAME, array_response
from mixcomm.system import sample_chain_batch

from conftest import make_identity_system


class TestSampleObservation:
    def test_noiseless_pass_through(self, rng):
        sys0 = make_identity_system(s=2)
        z = sample_observation([3.0, 4.0], sys0, rng)
        np.testing.assert_array_equal(z, [3.0, 4.0])

    def test_noiseless_mos_zero_concentration(self, rng):
        sysd = default_system("SIN")
        silent = SystemDescription(
            s=2,
            r=2,
            channel=sysd.channel,
            tx_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            ch_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            rx_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            sensor=sysd.sensor,
            feasible=sysd.feasible,
        )
        z = sample_observation([0.0, 0.0], silent, rng)
        np.testing.assert_array_equal(z, [7.43e-7, 7.77e-6])

    def test_noiseless_equals_sensor_of_attenuated_symbol(self, rng):
        sysd = default_system("SIN")
        silent = SystemDescription(
            s=2,
            r=2,
            channel=sysd.channel,
            tx_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            ch_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            rx_noise=GaussianNoise(np.zeros(2), np.zeros((2, 2))),
            sensor=sysd.sensor,
            feasible=sysd.feasible,
        )
        sym = np.array([5e4, 3e4])
        z = sample_observation(sym, silent, rng)
        np.testing.assert_array_equal(z, array_response(0.01 * sym, sysd.sensor))

    def test_deterministic_given_stream(self, table1_sin):
        rng = RngStream(99, 5)
        a = sample_observation([5e4, 3e4], table1_sin, rng)
        b = sample_observation([5e4, 3e4], table1_sin, rng)
        assert np.array_equal(a, b)

    def test_different_streams_differ(self, table1_sin):
        a = sample_observation([5e4, 3e4], table1_sin, RngStream(99, 5))
        b = sample_observation([5e4, 3e4], table1_sin, RngStream(99, 6))
        assert not np.array_equal(a, b)

    def test_negative_symbol_rejected(self, table1_sin, rng):
        with pytest.raises(DomainError):
            sample_observation([-1.0, 0.0], table1_sin, rng)

    def test_empirical_mean_of_x(self, table1_sin, rng):
        # Release-stage mean must match xbar + mu_tx; the defaults put the
        # symbol >= 15 sigma from the clamp so the bias is negligible.
        sym = np.array([5e4, 3e4])
        n = 100_000
        keys = rng.substream_keys(n)
        syms = np.ascontiguousarray(np.broadcast_to(sym, (n, 2)))
        x, _, _ = sample_chain_batch(syms, table1_sin, keys)
        se = np.sqrt(np.diag(table1_sin.tx_noise.cov) / n)
        assert np.all(np.abs(x.mean(axis=0) - sym) < 4 * se)

    def test_y_clamped_non_negative(self, rng):
        noisy = make_identity_system(s=2, ch_cov=100.0)
        sym = np.array([0.1, 0.1])
        keys = rng.substream_keys(20_000)
        syms = np.ascontiguousarray(np.broadcast_to(sym, (20_000, 2)))
        _, y, _ = sample_chain_batch(syms, noisy, keys)
        assert np.all(y >= 0.0)
        # The clamp must actually have bitten for this configuration.
        assert np.any(y == 0.0)

    def test_sdcn_noise_spreads_samples(self, table1_sdcn, rng):
        sym = np.array([5e4, 3e4])
        keys = rng.substream_keys(5000)
        syms = np.ascontiguousarray(np.broadcast_to(sym, (5000, 2)))
        _, y, _ = sample_chain_batch(syms, table1_sdcn, keys)
        # Channel variance at y ~ nu_c * H * xbar = 500 and 300.
        np.testing.assert_allclose(
            y.var(axis=0), [500 + 0.01**2 * 100, 300 + 0.01**2 * 100], rtol=0.15
        )


class TestScaleNoise:
    def test_identity_scaling(self, table1_sin):
        scaled = scale_noise(table1_sin, 1.0)
        np.testing.assert_array_equal(scaled.tx_noise.cov, table1_sin.tx_noise.cov)
        np.testing.assert_array_equal(scaled.rx_noise.cov, table1_sin.rx_noise.cov)

    def test_scalar_multiple(self, table1_sin):
        scaled = scale_noise(table1_sin, 4.0)
        np.testing.assert_array_equal(scaled.tx_noise.cov, 4e6 * np.eye(2))
        np.testing.assert_array_equal(scaled.ch_noise.cov, 4.0 * np.eye(2))
        np.testing.assert_array_equal(scaled.rx_noise.cov, 4e-12 * np.eye(2))
        np.testing.assert_array_equal(scaled.tx_noise.mu, table1_sin.tx_noise.mu)

    def test_sdcn_sets_nu_c(self, table1_sdcn):
        scaled = scale_noise(table1_sdcn, 0.25)
        assert isinstance(scaled.ch_noise, SqrtChannelNoise)
        assert scaled.ch_noise.nu_c == 0.25
        np.testing.assert_array_equal(scaled.tx_noise.cov, 0.25 * 1e2 * np.eye(2))

    def test_invalid_scale(self, table1_sin):
        with pytest.raises(InvalidSpec):
            scale_noise(table1_sin, 0.0)


class TestConstruction:
    def test_negative_attenuation_rejected(self):
        with pytest.raises(InvalidSpec):
            ChannelMatrix([-0.01, 0.01])

    def test_box_ordering_enforced(self):
        with pytest.raises(InvalidSpec):
            FeasibleBox([1.0, 0.0], [0.5, 1.0])
        with pytest.raises(InvalidSpec):
            FeasibleBox([-1.0], [1.0])

    def test_sqrt_noise_only_with_positive_nu(self):
        with pytest.raises(InvalidSpec):
            SqrtChannelNoise(nu_c=0.0)

    def test_tx_noise_must_be_gaussian(self):
        sysd = default_system("SIN")
        with pytest.raises(InvalidSpec):
            SystemDescription(
                s=2,
                r=2,
                channel=sysd.channel,
                tx_noise=SqrtChannelNoise(nu_c=1.0),
                ch_noise=sysd.ch_noise,
                rx_noise=sysd.rx_noise,
                sensor=sysd.sensor,
                feasible=sysd.feasible,
            )

    def test_dimension_checks(self):
        sysd = default_system("SIN")
        with pytest.raises(DimensionMismatch):
            SystemDescription(
                s=2,
                r=2,
                channel=ChannelMatrix([0.01]),
                tx_noise=sysd.tx_noise,
                ch_noise=sysd.ch_noise,
                rx_noise=sysd.rx_noise,
                sensor=sysd.sensor,
                feasible=sysd.feasible,
            )

    def test_default_system_matches_published_values(self):
        sysd = default_system("SIN")
        np.testing.assert_array_equal(sysd.channel.h, [0.01, 0.01])
        np.testing.assert_array_equal(sysd.tx_noise.cov, 1e6 * np.eye(2))
        np.testing.assert_array_equal(sysd.ch_noise.cov, np.eye(2))
        np.testing.assert_array_equal(sysd.rx_noise.cov, 1e-12 * np.eye(2))
        np.testing.assert_array_equal(sysd.feasible.lo, [20e3, 15e3])
        np.testing.assert_array_equal(sysd.feasible.hi, [10e4, 50e3])
        s2 = default_system("SDCN")
        assert isinstance(s2.ch_noise, SqrtChannelNoise)
        assert s2.ch_noise.nu_c == 1.0
        np.testing.assert_array_equal(s2.tx_noise.cov, 1e2 * np.eye(2))
        np.testing.assert_array_equal(s2.rx_noise.cov, 0.5e-12 * np.eye(2))
        preset = sensor_preset(TGS_PRESET_NAME)
        np.testing.assert_array_equal(s2.sensor.s1.a, preset.s1.a)
