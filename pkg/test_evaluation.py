#!/usr/bin/env python3
"""
Sector selection, calibration, metrics and Monte-Carlo orchestration
"""
import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from app.algorithms.beam_design import Sector, beam_ensemble, in_sector_energy, sector_tiling
from app.algorithms.channel import ChannelScenarioConfig, GridMode
from app.algorithms.dft_core import dft, idft
from app.algorithms.sampling import Scheme, uniform_shifts
from app.errors import CalibrationError, ConfigurationError, TrialError, UndefinedMetricError
from app.evaluation import (
    ExperimentConfig, OmpConfig, SnrReference, TrialRecord, achievable_rate, design_sector_beams,
    effective_coherence, genie_beams, greedy_benchmark_beams, noise_std_for_snr, nmse, run_experiment,
    run_full_band, run_single_estimate, sls_select_sector, snr_linear, strongest_sector, sweep_points,
)


def _small_config(**overrides) -> ExperimentConfig:
    values = dict(
        n_antennas=64, n_sectors=4, m=16, snr_db=None, trials=4, scheme=Scheme.PCS,
        channel=ChannelScenarioConfig(n_antennas=64, k_rays=3, grid_mode=GridMode.on_grid),
        n_mask_candidates=50, seed=3,
    )
    values.update(overrides)
    return ExperimentConfig(**values)


def _band_channel(n, indices, gains):
    g = np.zeros(n, dtype=complex)
    g[list(indices)] = gains
    return idft(g)


# ── SLS ──────────────────────────────────────────────────────────────────────

def test_sls_picks_the_sector_holding_the_energy():
    beams = design_sector_beams(64, 4, 50, 0)
    h = _band_channel(64, [36, 40], [1.0, 0.5j])
    assert sls_select_sector(h, beams) == 2
    assert sls_select_sector(-3.5j * h, beams) == 2


def test_sls_zero_channel_ties_to_sector_zero():
    assert sls_select_sector(np.zeros(64), design_sector_beams(64, 4, 50, 0)) == 0


def test_sls_always_right_for_single_band_on_grid_channels():
    beams = design_sector_beams(64, 4, 50, 1)
    rng = np.random.default_rng(0)
    for _ in range(100):
        s = int(rng.integers(0, 4))
        idx = rng.choice(np.arange(16 * s, 16 * s + 16), size=3, replace=False)
        h = _band_channel(64, idx, rng.standard_normal(3) + 1j * rng.standard_normal(3))
        assert sls_select_sector(h, beams) == s


def test_strongest_sector():
    sectors = sector_tiling(64, 4)
    g = np.zeros(64, dtype=complex)
    g[5], g[50] = 1.0, 2.0
    assert strongest_sector(g, sectors) == 3


# ── Calibration and metrics ──────────────────────────────────────────────────

def test_noise_std_at_zero_db():
    beams = np.eye(4, 8, dtype=complex)
    channels = [np.arange(8) + 1j, np.ones(8)]
    energy = np.mean([np.sum(np.abs(beams.conj() @ h) ** 2) for h in channels])
    assert noise_std_for_snr(beams, channels, 0.0) ** 2 == pytest.approx(energy / 4)


def test_noise_variance_drops_tenfold_per_ten_db():
    beams = np.eye(4, 8, dtype=complex)
    channels = [np.ones(8)]
    low = noise_std_for_snr(beams, channels, 0.0)
    high = noise_std_for_snr(beams, channels, 10.0)
    assert low ** 2 / high ** 2 == pytest.approx(10.0)


def test_noise_std_matches_orthogonal_beam_oracle():
    # uniform shifts of a unit-norm in-sector beam: ||F h||^2 = ||g_L||^2
    n, sector = 64, Sector(16, 31, 64)
    base = design_sector_beams(64, 4, 50, 0)[1]
    beams = beam_ensemble(base, uniform_shifts(n, 16))
    h = _band_channel(n, [17, 20, 30], [2.0, 2.0j, -2.0 * np.sqrt(2)])
    g_l = dft(h)[sector.indices]
    sigma = noise_std_for_snr(beams, [h], 5.0)
    assert sigma ** 2 == pytest.approx(np.sum(np.abs(g_l) ** 2) / 16 / 10 ** 0.5, rel=1e-10)


def test_noise_std_per_channel_beam_sets():
    beams = [np.eye(2, 4, dtype=complex), np.eye(2, 4, k=2, dtype=complex)]
    channels = [np.array([1, 1, 0, 0]), np.array([0, 0, 1, 1])]
    assert noise_std_for_snr(beams, channels, 0.0) == pytest.approx(1.0)


def test_noise_std_all_zero_channels():
    with pytest.raises(CalibrationError):
        noise_std_for_snr(np.eye(2, 4), [np.zeros(4)], 0.0)
    with pytest.raises(ZeroDivisionError):
        noise_std_for_snr(np.eye(2, 4), [np.zeros(4), np.zeros(4)], 3.0)


@pytest.mark.parametrize("snr_db", [float("-inf"), float("nan"), -4000.0, 4000.0])
def test_snr_without_a_finite_linear_value_is_rejected(snr_db):
    with pytest.raises(ConfigurationError):
        snr_linear(snr_db)
    with pytest.raises(ConfigurationError):
        noise_std_for_snr(np.eye(2, 4), [np.ones(4)], snr_db)


def test_snr_linear():
    assert snr_linear(10.0) == pytest.approx(10.0)
    assert snr_linear(-300.0) == pytest.approx(1e-30)


def test_nmse_is_ratio_of_sums():
    records = [
        TrialRecord(0, 0, nmse_numerator=1.0, nmse_denominator=1.0, rate_bits=0.0, mu=0.0),
        TrialRecord(1, 0, nmse_numerator=1.0, nmse_denominator=9.0, rate_bits=0.0, mu=0.0),
    ]
    assert nmse(records) == pytest.approx(0.2)
    assert nmse(list(reversed(records))) == pytest.approx(0.2)
    perfect = [TrialRecord(0, 0, 0.0, 4.0, 0.0, 0.0)]
    assert nmse(perfect) == 0.0
    zero_estimate = [TrialRecord(0, 0, 4.0, 4.0, 0.0, 0.0)]
    assert nmse(zero_estimate) == 1.0


def test_nmse_undefined():
    with pytest.raises(UndefinedMetricError):
        nmse([TrialRecord(0, 0, 0.0, 0.0, 0.0, 0.0)])
    with pytest.raises(UndefinedMetricError):
        nmse([])


def test_rate_perfect_orthogonal_and_degenerate(caplog):
    h = np.array([1.0, 1j, -1.0, 0.5])
    assert achievable_rate(h, h, 0.1) == pytest.approx(np.log2(1 + np.vdot(h, h).real / 0.1))
    assert achievable_rate(np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0]), 1.0) == pytest.approx(0.0)
    with caplog.at_level(logging.WARNING):
        assert achievable_rate(np.zeros(4), h, 1.0) == 0.0
    assert "Zero channel estimate" in caplog.text


def test_rate_decreases_with_error():
    rng = np.random.default_rng(0)
    h = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    e = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    e -= np.vdot(h, e) / np.vdot(h, h) * h
    bound = achievable_rate(h, h, 0.5)
    rates = [achievable_rate(h + t * e, h, 0.5) for t in (0.0, 0.1, 0.5, 1.0, 3.0)]
    assert all(0 <= r <= bound + 1e-12 for r in rates)
    assert all(a >= b for a, b in zip(rates, rates[1:]))


# ── Benchmark schemes ────────────────────────────────────────────────────────

def test_greedy_returns_whole_pool_when_factor_is_one():
    sector = Sector(0, 15, 64)
    beams = greedy_benchmark_beams(sector, 5, 1, np.random.default_rng(0))
    rng = np.random.default_rng(0)
    pool = rng.standard_normal((5, 64)) + 1j * rng.standard_normal((5, 64))
    pool /= np.linalg.norm(pool, axis=1, keepdims=True)
    assert beams.shape == (5, 64)
    assert_allclose(np.sort_complex(beams[:, 0]), np.sort_complex(pool[:, 0]), atol=1e-12)


def test_greedy_keeps_the_top_beams():
    sector = Sector(16, 31, 64)
    beams = greedy_benchmark_beams(sector, 4, 30, np.random.default_rng(1))
    rng = np.random.default_rng(1)
    pool = rng.standard_normal((120, 64)) + 1j * rng.standard_normal((120, 64))
    pool /= np.linalg.norm(pool, axis=1, keepdims=True)
    scores = np.sort([in_sector_energy(f, sector) for f in pool])[::-1]
    kept = sorted((in_sector_energy(f, sector) for f in beams), reverse=True)
    assert_allclose(kept, scores[:4], rtol=1e-12)
    assert_allclose(np.linalg.norm(beams, axis=1), 1.0, atol=1e-12)


def test_greedy_beams_leak_out_of_sector():
    sector = Sector(64, 127, 256)
    beams = greedy_benchmark_beams(sector, 20, 30, np.random.default_rng(2))
    fractions = [in_sector_energy(f, sector) for f in beams]
    assert 0.25 < np.mean(fractions) < 1.0


def test_genie_beams_measure_the_sector_beamspace():
    sector = Sector(16, 31, 64)
    h = np.random.default_rng(4).standard_normal(64) + 0j
    assert_allclose(genie_beams(sector).conj() @ h, dft(h)[16:32], atol=1e-12)
    assert effective_coherence(genie_beams(sector), sector) <= 1e-12


def test_effective_coherence_of_uniform_ensemble_is_zero():
    base = design_sector_beams(64, 4, 50, 0)[0]
    beams = beam_ensemble(base, uniform_shifts(64, 16))
    assert effective_coherence(beams, base.sector) <= 1e-12


# ── Experiments ──────────────────────────────────────────────────────────────

def test_config_validation():
    with pytest.raises(ValidationError):
        _small_config(n_sectors=3)
    with pytest.raises(ValidationError):
        _small_config(m=17)
    with pytest.raises(ValueError):
        _small_config(target_sector=4)
    with pytest.raises(ValidationError):
        _small_config(channel=ChannelScenarioConfig(n_antennas=32))
    with pytest.raises(ValidationError):
        _small_config(snr_db=float("-inf"))
    with pytest.raises(ValidationError):
        _small_config(snr_db=5.0, snr_values=[0.0, -4000.0])
    assert _small_config(snr_db=float("inf")).noiseless()
    assert _small_config(m=17, scheme=Scheme.RCS).m == 17


def test_exact_recovery_noiseless_on_grid_full_sampling():
    result = run_experiment(_small_config(trials=1))
    assert result.summary.nmse < 1e-18
    assert result.records[0].mu <= 1e-12
    assert np.isnan(result.summary.mean_rate_bits)


def test_runs_are_deterministic_and_thread_independent():
    config = _small_config(m=8, snr_db=5.0, trials=6, channel=ChannelScenarioConfig(n_antennas=64, k_rays=2))
    a = run_experiment(config, threads=1)
    b = run_experiment(config, threads=3)
    assert [r.to_dict() for r in a.records] == [r.to_dict() for r in b.records]
    assert a.summary.nmse == b.summary.nmse


@pytest.mark.parametrize("scheme", [Scheme.PCS, Scheme.RCS, Scheme.GREEDY, Scheme.GENIE])
def test_every_scheme_runs(scheme):
    config = _small_config(m=8, snr_db=10.0, trials=3, scheme=scheme)
    result = run_experiment(config)
    assert len(result.records) == 3
    assert result.summary.nmse >= 0
    assert all(0 <= r.mu <= 8 / 64 + 1e-12 for r in result.records)
    assert all(r.rate_bits >= 0 for r in result.records)
    expected_m = 16 if scheme == Scheme.GENIE else 8
    assert all(r.n_measurements == expected_m for r in result.records)


def test_genie_is_exact_without_noise():
    result = run_experiment(_small_config(scheme=Scheme.GENIE, trials=3,
                                          channel=ChannelScenarioConfig(n_antennas=64, k_rays=3)))
    assert result.summary.nmse < 1e-20


def test_oversampled_pipeline_runs_for_pcs():
    config = _small_config(m=12, snr_db=5.0, trials=3, omp=OmpConfig(oversampling=4),
                           channel=ChannelScenarioConfig(n_antennas=64, k_rays=2))
    assert run_experiment(config).summary.nmse >= 0


def test_scheme_snr_reference_changes_noise_level():
    config = _small_config(m=8, snr_db=0.0, scheme=Scheme.RCS, trials=4)
    sector_ref = run_experiment(config).summary.noise_std
    scheme_ref = run_experiment(config.model_copy(update={"snr_reference": SnrReference.scheme})).summary.noise_std
    assert sector_ref > 0 and scheme_ref > 0
    assert sector_ref != pytest.approx(scheme_ref)


def test_zero_channel_calibration_fails_as_calibration_error():
    config = _small_config(snr_db=5.0, trials=2)
    import app.evaluation as evaluation
    original = evaluation.synthesize_channel
    evaluation.synthesize_channel = lambda rays, n: np.zeros(n, dtype=complex)
    try:
        with pytest.raises(CalibrationError):
            run_experiment(config)
    finally:
        evaluation.synthesize_channel = original


def test_trial_failure_carries_the_trial_index(monkeypatch):
    import app.evaluation as evaluation

    def broken(*args, **kwargs):
        raise UndefinedMetricError("boom")

    monkeypatch.setattr(evaluation, "recover", broken)
    with pytest.raises(TrialError) as info:
        run_experiment(_small_config(trials=2))
    assert info.value.trial_index == 0
    assert "boom" in str(info.value)


def test_single_estimate_returns_vectors():
    outcome = run_single_estimate(_small_config())
    assert outcome.g_l.shape == (16,)
    assert_allclose(outcome.g_hat_l, outcome.g_l, atol=1e-9)
    assert len(outcome.support) == 3


def test_full_band_exact_across_two_sectors():
    config = _small_config(m=16)
    h = _band_channel(64, [3, 9, 40], [1.0, -0.5j, 0.75])
    result = run_full_band(config, h)
    assert result.nmse < 1e-18
    assert result.n_measurements == 4 * 16
    assert {3, 9, 40} <= set(result.support)
    assert len(result.support) == sum(len(s) for s in result.supports)


def test_full_band_matches_single_sector_pipeline():
    config = _small_config(m=16)
    h = _band_channel(64, [20, 27], [1.0, 1j])
    full = run_full_band(config, h)
    assert_allclose(full.g_hat[16:32], dft(h)[16:32], atol=1e-9)
    assert np.all(np.abs(np.delete(full.g_hat, np.arange(16, 32))) < 1e-9)


def test_full_band_draws_its_own_channel():
    result = run_full_band(_small_config(m=16))
    assert result.nmse < 1e-18


def test_sweep_points_expand_the_grid():
    config = _small_config(m_values=[4, 8], snr_values=[0.0, 5.0], schemes=[Scheme.PCS, Scheme.GENIE])
    points = sweep_points(config)
    assert [(p.scheme, p.m, p.snr_db) for p in points] == [
        (Scheme.PCS, 4, 0.0), (Scheme.PCS, 4, 5.0), (Scheme.PCS, 8, 0.0), (Scheme.PCS, 8, 5.0),
        (Scheme.GENIE, 16, 0.0), (Scheme.GENIE, 16, 5.0),
    ]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
