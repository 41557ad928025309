"""Stochastic records: synthesis fidelity, OU statistics, moment estimates."""

import dataclasses

import numpy as np
import pytest

from srled import (
    InvalidParamsError,
    ModelParams,
    MonteCarloConfig,
    SpectralDensity,
    StepTooLargeError,
    TooFewRecordsError,
    derive_populations,
    estimate_moments,
    g2_closed,
    mean_photon_closed,
    ou_population_path,
    run_monte_carlo,
    simulate_field_record,
    synthesize_colored_noise,
)
from srled.errors import GridMismatchError
from srled.model import commutator_spectrum
from srled.montecarlo import record_rng

from conftest import EX1_ORACLE


def _flat_density(config, level=1.0):
    grid = config.frequency_grid()
    return SpectralDensity(grid, np.full(config.n_samples, level), label="flat")


class TestConfig:
    def test_power_of_two_required(self):
        with pytest.raises(InvalidParamsError):
            MonteCarloConfig(duration=100.0, n_samples=1000)

    def test_for_model_resolves_scales(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        assert config.duration >= 50.0 / ex1_pops.gamma_p * (1.0 - 1e-12)
        assert np.pi / config.dt >= 10.0 * max(ex1.kappa, ex1.gamma_perp)
        assert ex1_pops.gamma_p * config.dt <= 0.1

    def test_rng_streams_are_independent(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops, seed=3)
        a = record_rng(config, 0).standard_normal(8)
        b = record_rng(config, 1).standard_normal(8)
        a2 = record_rng(config, 0).standard_normal(8)
        np.testing.assert_array_equal(a, a2)
        assert not np.allclose(a, b)


class TestColoredNoise:
    def test_flat_spectrum_is_white(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        flat = _flat_density(config)
        rng = record_rng(config, 0)
        var = np.mean([np.mean(np.abs(synthesize_colored_noise(flat, config, rng)) ** 2)
                       for _ in range(40)])
        # variance = bandwidth / (2 pi) = 1/dt for a unit flat spectrum
        assert var == pytest.approx(1.0 / config.dt, rel=0.02)

    def test_zero_spectrum_gives_zero_series(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        series = synthesize_colored_noise(_flat_density(config, 0.0), config, record_rng(config, 0))
        assert np.all(series == 0.0)

    def test_commutator_variance_is_unity(self, ex1, ex1_pops):
        # wide band so the omega^-2 tails of c are inside the record
        config = MonteCarloConfig.for_model(ex1, ex1_pops, nyquist_factor=80.0)
        grid = config.frequency_grid()
        dens = SpectralDensity(grid, commutator_spectrum(ex1, ex1_pops, grid.omegas()), "c")
        nr = 100
        vals = np.array([
            np.mean(np.abs(synthesize_colored_noise(dens, config, record_rng(config, i))) ** 2)
            for i in range(nr)])
        se = vals.std(ddof=1) / np.sqrt(nr)
        assert abs(vals.mean() - 1.0) <= 3.0 * se

    def test_periodogram_matches_target(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        grid = config.frequency_grid()
        dens = SpectralDensity(grid, commutator_spectrum(ex1, ex1_pops, grid.omegas()), "c")
        acc = np.zeros(config.n_samples)
        nr = 150
        for i in range(nr):
            series = synthesize_colored_noise(dens, config, record_rng(config, i))
            acc += np.abs(np.fft.ifft(series)) ** 2 * config.duration
        est = np.fft.fftshift(acc / nr)
        # block-average bins so the per-bin noise (100%/sqrt(nr)) drops
        block = 64
        m = (config.n_samples // block) * block
        est_b = est[:m].reshape(-1, block).mean(axis=1)
        tgt_b = dens.values[:m].reshape(-1, block).mean(axis=1)
        center = slice(int(0.1 * len(est_b)), int(0.9 * len(est_b)))
        rel = np.abs(est_b[center] - tgt_b[center]) / tgt_b[center]
        assert rel.max() < 0.05

    def test_quadratures_independent(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        series = np.concatenate([
            synthesize_colored_noise(_flat_density(config), config, record_rng(config, i))
            for i in range(20)])
        re, im = series.real, series.imag
        corr = np.mean(re * im) / np.sqrt(np.mean(re ** 2) * np.mean(im ** 2))
        assert abs(corr) < 0.01
        assert np.mean(re ** 2) == pytest.approx(np.mean(im ** 2), rel=0.02)

    def test_grid_mismatch(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        other = dataclasses.replace(config, duration=config.duration / 2.0,
                                    n_samples=config.n_samples // 2)
        with pytest.raises(GridMismatchError):
            synthesize_colored_noise(_flat_density(other), config, record_rng(config, 0))


class TestOUPath:
    def test_zero_dispersion_gives_zero_path(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        path = ou_population_path(ex1_pops.without_fluctuations(), config, record_rng(config, 0))
        assert np.all(path == 0.0)

    def test_variance_matches_dispersion(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        nr = 200
        vals = np.array([np.mean(ou_population_path(ex1_pops, config, record_rng(config, i)) ** 2)
                         for i in range(nr)])
        se = vals.std(ddof=1) / np.sqrt(nr)
        assert abs(vals.mean() - EX1_ORACLE["delta2_ne"]) <= 3.0 * se

    def test_autocorrelation_time(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops)
        lag = int(round(1.0 / (ex1_pops.gamma_p * config.dt)))
        acc, nr = 0.0, 150
        for i in range(nr):
            x = ou_population_path(ex1_pops, config, record_rng(config, i))
            acc += np.mean(x[:-lag] * x[lag:])
        target = np.exp(-ex1_pops.gamma_p * lag * config.dt) * EX1_ORACLE["delta2_ne"]
        assert acc / nr == pytest.approx(target, rel=0.05)

    def test_step_too_large(self, ex1, ex1_pops):
        config = MonteCarloConfig(duration=512.0, n_samples=512)  # dt = 1
        with pytest.raises(StepTooLargeError):
            ou_population_path(ex1_pops, config, record_rng(config, 0))

    def test_burn_in_discards_transient(self, ex1, ex1_pops):
        config = dataclasses.replace(MonteCarloConfig.for_model(ex1, ex1_pops), burn_in=0.25)
        nr = 150
        vals = np.array([np.mean(ou_population_path(ex1_pops, config, record_rng(config, i)) ** 2)
                         for i in range(nr)])
        se = vals.std(ddof=1) / np.sqrt(nr)
        # burn-in long enough (0.25 T ~ 6 correlation times) to look stationary
        assert abs(vals.mean() - EX1_ORACLE["delta2_ne"]) <= 4.0 * se


class TestFieldRecords:
    def test_zero_field_without_emitters_or_noise(self, ex1):
        params = dataclasses.replace(ex1, pump=0.0)
        pops = derive_populations(params)  # N_e = 0 and delta2_ne = 0
        config = MonteCarloConfig.for_model(params, pops)
        rec = simulate_field_record(params, pops, config, record_rng(config, 0))
        assert np.all(rec == 0.0)

    def test_gaussian_limit_without_fluctuations(self, ex1, ex1_pops):
        frozen = ex1_pops.without_fluctuations()
        config = MonteCarloConfig.for_model(ex1, frozen, n_records=150, seed=11)
        est = run_monte_carlo(ex1, frozen, config)
        assert abs(est.g2 - 2.0) <= 3.0 * est.g2_se
        assert abs(est.n - EX1_ORACLE["n0"]) <= 3.0 * est.n_se

    def test_ex1_moments_match_exact_pipeline(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops, n_records=500, seed=505)
        est = run_monte_carlo(ex1, ex1_pops, config)
        assert est.g2_se <= 0.02
        assert abs(est.n - EX1_ORACLE["n_exact"]) <= 3.0 * est.n_se
        assert abs(est.g2 - EX1_ORACLE["g2_full"]) <= 3.0 * est.g2_se

    def test_seed_determinism(self, ex1, ex1_pops):
        config = MonteCarloConfig.for_model(ex1, ex1_pops, n_records=40, seed=9)
        a = run_monte_carlo(ex1, ex1_pops, config)
        b = run_monte_carlo(ex1, ex1_pops, config)
        assert a == b

    def test_config_check_rejects_short_records(self, ex1, ex1_pops):
        bad = MonteCarloConfig(duration=64.0, n_samples=512, n_records=40)
        with pytest.raises(InvalidParamsError):
            run_monte_carlo(ex1, ex1_pops, bad)


class TestEstimateMoments:
    def _thermal_records(self, rng, n_records=80, n_samples=256):
        return [rng.standard_normal(n_samples) * 1j + rng.standard_normal(n_samples)
                for _ in range(n_records)]

    def test_gaussian_input_gives_two(self):
        rng = np.random.default_rng(1)
        est = estimate_moments(self._thermal_records(rng))
        assert abs(est.g2 - 2.0) <= 3.0 * est.g2_se

    def test_stabilized_amplitude_gives_one(self):
        rng = np.random.default_rng(2)
        records = []
        for _ in range(60):
            phase = rng.uniform(0.0, 2.0 * np.pi, 256)
            amp = 1.0 + 0.01 * rng.standard_normal(256)  # slight jitter
            records.append(amp * np.exp(1j * phase))
        est = estimate_moments(records)
        assert abs(est.g2 - 1.0) <= 3.0 * est.g2_se + 1e-3

    def test_too_few_records(self):
        rng = np.random.default_rng(3)
        with pytest.raises(TooFewRecordsError):
            estimate_moments(self._thermal_records(rng, n_records=10))

    def test_sanity_bound(self):
        rng = np.random.default_rng(4)
        est = estimate_moments(self._thermal_records(rng))
        assert est.g2 >= 1.0 - 3.0 * est.g2_se
        assert est.n_se > 0.0 and est.g2_se > 0.0

    def test_se_scaling_with_records(self):
        # SE(g2) ~ records^(-1/2): fit the exponent over 4 ensemble sizes
        rng = np.random.default_rng(5)
        sizes = (50, 100, 200, 400)
        ses = []
        for size in sizes:
            est = estimate_moments(self._thermal_records(rng, n_records=size))
            ses.append(est.g2_se)
        slope = np.polyfit(np.log(sizes), np.log(ses), 1)[0]
        assert slope == pytest.approx(-0.5, abs=0.1)
