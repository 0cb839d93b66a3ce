"""Tests for the seeded Monte-Carlo achievability simulator.

The empirical checks use fixed seeds so every run is deterministic. The
frozen direct-MMSE constant was computed independently with an mpmath
program at 50 decimal digits.
"""

import math

import numpy as np
import pytest

from symrd import (
    PrecisionError,
    SimConfig,
    SourceSpec,
    ValidationError,
    analytic_rate,
    d_min,
    distortion_of,
    empirical_distortion,
    from_eigenvalues,
    rate_of,
    run_simulation,
    sample_model,
    solve_lambda_q,
    source_variance,
    spectral_decompose,
)
from symrd.simulate import BLOCK_SIZE, direct_mmse

L_CASES = 10
CASE1 = (0.8, 1.0, 5.0, 4.0)

# 50-digit reference: test-channel variance solving the case-1 distortion
# constraint at D = 0.85, and the direct (unrouted) X + Q estimator's MMSE
# at that same variance.
CASE1_LAMBDA_Q_AT_085 = 3.35647126829087463107618961374
CASE1_DIRECT_MMSE = 0.758013103784151919238018500817


def _case1_config(n=100_000, seed=20240517):
    spec = from_eigenvalues(L_CASES, *CASE1)
    return SimConfig(spec, CASE1_LAMBDA_Q_AT_085, n, seed)


def test_direct_mmse_frozen():
    s = spectral_decompose(from_eigenvalues(L_CASES, *CASE1))
    got = direct_mmse(s, L_CASES, CASE1_LAMBDA_Q_AT_085)
    assert abs(got - CASE1_DIRECT_MMSE) < 1e-13
    # the routed and direct estimators genuinely disagree at this probe
    assert abs(0.85 - CASE1_DIRECT_MMSE) > 0.05


def test_run_is_deterministic():
    cfg = _case1_config(n=20_000)
    first = run_simulation(cfg)
    run_simulation.cache_clear()
    second = run_simulation(cfg)
    assert first == second


def test_result_is_cached():
    cfg = _case1_config(n=20_000)
    assert run_simulation(cfg) is run_simulation(cfg)


def test_different_seeds_differ():
    r1 = run_simulation(_case1_config(n=20_000, seed=1))
    r2 = run_simulation(_case1_config(n=20_000, seed=2))
    assert r1.distortion_empirical != r2.distortion_empirical


def test_sample_shapes_across_block_boundary():
    n = BLOCK_SIZE + 17
    cfg = _case1_config(n=n)
    x, z, q = sample_model(cfg)
    assert x.shape == (n, L_CASES)
    assert z.shape == (n, L_CASES)
    assert q.shape == (n, L_CASES)


def test_block_layout_is_offset_invariant():
    # the first samples of a long run equal the full short run: streams are
    # keyed per block, not per run length
    short = sample_model(_case1_config(n=BLOCK_SIZE))
    long = sample_model(_case1_config(n=BLOCK_SIZE + 1000))
    for a, b in zip(short, long):
        assert np.array_equal(a, b[:BLOCK_SIZE])


def test_empirical_distortion_within_band():
    cfg = _case1_config(n=200_000)
    res = run_simulation(cfg)
    assert abs(res.distortion_closed_form - 0.85) < 1e-12
    assert abs(res.distortion_empirical - 0.85) <= 4.0 * res.std_err
    assert res.matches_routed_identity
    assert empirical_distortion(cfg) == res.distortion_empirical


def test_direct_estimator_reported_alongside():
    res = run_simulation(_case1_config(n=200_000))
    assert abs(res.distortion_direct_closed_form - CASE1_DIRECT_MMSE) < 1e-12
    # direct empirical concentrates near its own closed form, far from D
    assert abs(res.distortion_direct_empirical - CASE1_DIRECT_MMSE) < 0.01
    assert abs(res.distortion_direct_empirical - 0.85) > 0.05


def test_rate_closed_form_matches_channel_rate():
    s = spectral_decompose(from_eigenvalues(L_CASES, *CASE1))
    res = run_simulation(_case1_config(n=20_000))
    assert res.rate_closed_form == rate_of(s, L_CASES, CASE1_LAMBDA_Q_AT_085)
    assert abs(res.lambda_q - CASE1_LAMBDA_Q_AT_085) == 0.0


def test_empirical_rate_within_band():
    for n in (10_000, 100_000):
        res = run_simulation(_case1_config(n=n))
        band = 6.0 * math.sqrt(8.0 * L_CASES / n) + 50.0 * L_CASES ** 2 / n
        assert abs(res.rate_empirical - res.rate_closed_form) <= band


def test_analytic_rate_returns_closed_form():
    cfg = _case1_config(n=100_000)
    assert analytic_rate(cfg) == run_simulation(cfg).rate_closed_form


def test_analytic_rate_rejects_degenerate_sample():
    # far fewer samples than dimensions: the joint second-moment matrix is
    # singular and the empirical mutual information is undefined
    with pytest.raises(PrecisionError):
        analytic_rate(_case1_config(n=5))


def test_sampled_covariance_matches_model():
    spec = SourceSpec(4, 1.0, 0.3, 0.25, 0.1)
    cfg = SimConfig(spec, 1.0, 300_000, 8151)
    x, z, q = sample_model(cfg)
    cx = x.T @ x / cfg.n_samples
    assert np.max(np.abs(np.diag(cx) - 1.0)) < 0.01
    off = cx[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off - 0.3)) < 0.01
    cz = z.T @ z / cfg.n_samples
    assert np.max(np.abs(np.diag(cz) - 0.25)) < 0.01
    cq = q.T @ q / cfg.n_samples
    assert np.max(np.abs(cq - np.eye(4) * cfg.lambda_q)) < 0.01


def test_negative_correlation_covariance():
    # rho < 0 uses the rotated eigen synthesis; the sampled covariance must
    # still match the model
    spec = SourceSpec(3, 1.0, -0.3, 0.0, 0.0)
    cfg = SimConfig(spec, 1.0, 300_000, 977)
    x, _, _ = sample_model(cfg)
    cx = x.T @ x / cfg.n_samples
    assert np.max(np.abs(np.diag(cx) - 1.0)) < 0.01
    off = cx[~np.eye(3, dtype=bool)]
    assert np.max(np.abs(off + 0.3)) < 0.01


def test_fully_correlated_components_identical():
    # rho_x = 1 collapses the source to a single common factor (the noise
    # keeps gamma_y positive so the spec stays valid)
    spec = SourceSpec(4, 2.0, 1.0, 1.0, 0.0)
    x, _, _ = sample_model(SimConfig(spec, 0.5, 1000, 3))
    for j in range(1, 4):
        assert np.array_equal(x[:, 0], x[:, j])


def test_noiseless_observation_samples_zero_z():
    spec = SourceSpec(4, 2.0, 0.3, 0.0, 0.0)
    _, z, _ = sample_model(SimConfig(spec, 0.5, 1000, 3))
    assert not z.any()


def test_lambda_q_limits_of_closed_forms():
    s = spectral_decompose(from_eigenvalues(L_CASES, *CASE1))
    assert abs(distortion_of(s, L_CASES, 1e-9) - d_min(s, L_CASES)) < 1e-9
    assert abs(distortion_of(s, L_CASES, 1e12)
               - source_variance(s, L_CASES)) < 1e-10


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lambda_q=0.0),
        dict(lambda_q=-1.0),
        dict(n_samples=0),
    ],
)
def test_config_validation(kwargs):
    spec = from_eigenvalues(L_CASES, *CASE1)
    base = dict(spec=spec, lambda_q=1.0, n_samples=100, seed=0)
    base.update(kwargs)
    with pytest.raises(ValidationError):
        run_simulation(SimConfig(**base))


def test_config_validates_spec():
    bad = SourceSpec(1, 1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValidationError):
        run_simulation(SimConfig(bad, 1.0, 100, 0))


def test_distortion_consistent_with_noisier_channel():
    # more test-channel noise means strictly more distortion, reflected in
    # both the closed form and (at this sample size) the empirical estimate
    spec = from_eigenvalues(L_CASES, *CASE1)
    lo = run_simulation(SimConfig(spec, 1.0, 100_000, 12))
    hi = run_simulation(SimConfig(spec, 8.0, 100_000, 12))
    assert hi.distortion_closed_form > lo.distortion_closed_form
    assert hi.distortion_empirical > lo.distortion_empirical
