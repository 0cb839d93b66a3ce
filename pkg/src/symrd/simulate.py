"""Monte-Carlo verification of the additive test channel.

Samples the symmetric Gaussian model, forms the conveyed variable
V = Y + Q with i.i.d. Gaussian test noise Q of per-component variance
lambda_q, and empirically checks the two closed-form identities the
achievability argument rests on: the per-component MMSE

    (1/L) [ lambda_x (1 - lambda_x / (lambda_y + lambda_q))
            + (L-1) gamma_x (1 - gamma_x / (gamma_y + lambda_q)) ]

and the rate I(Y; V) = 1/2 log(1 + lambda_y/lambda_q)
+ (L-1)/2 log(1 + gamma_y/lambda_q).

The printed MMSE identity carries the observation eigenvalues
(lambda_y + lambda_q in the denominators), i.e. the estimator conditions
on a V built from Y.  Conditioning on X + Q instead gives source-eigenvalue
denominators and a different value.  Rather than picking silently, the
simulation computes both: distortion_empirical follows the Y-routed
estimator (this is the one that reproduces the solved distortion target),
the direct X + Q channel is reported alongside it, and
matches_routed_identity records whether the empirical value agrees with
the printed identity within its statistical band.

Reproducibility: sampling is partitioned into fixed-size blocks, each drawn
from a counter-based generator keyed by (seed, block_index), so the stream
neither depends on how blocks are scheduled nor on how many workers reduce
them; cross-block reduction uses compensated summation, making results
bit-stable for a given seed and identical to 1e-12 under any re-partition
of the block sums.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import PrecisionError, ValidationError
from .model import SourceSpec, Spectrum, eigenbasis, spectral_decompose
from .upper_bound import distortion_of, rate_of

# Samples per RNG block; also the reduction granularity.
BLOCK_SIZE = 1 << 17


@dataclass(frozen=True)
class SimConfig:
    """One simulation setup: model, test-noise level, sample count, seed."""

    spec: SourceSpec
    lambda_q: float
    n_samples: int
    seed: int


@dataclass(frozen=True)
class SimResult:
    """Everything one simulation run measures, plus the closed forms.

    std_err is the standard error of distortion_empirical;
    rate_empirical is NaN when the sample covariance is not positive
    definite (sample count too small for the 2L x 2L moment matrix).
    """

    n_samples: int
    lambda_q: float
    distortion_empirical: float
    distortion_closed_form: float
    distortion_direct_empirical: float
    distortion_direct_closed_form: float
    rate_closed_form: float
    rate_empirical: float
    std_err: float
    matches_routed_identity: bool


def _validate_config(config: SimConfig) -> Spectrum:
    if not config.lambda_q > 0.0:
        raise ValidationError(f"lambda_q must be positive, got {config.lambda_q!r}")
    if config.n_samples < 1:
        raise ValidationError(f"n_samples must be at least 1, got {config.n_samples!r}")
    return spectral_decompose(config.spec)


def direct_mmse(spectrum: Spectrum, L: int, lambda_q: float) -> float:
    """Per-component MMSE of estimating X from X + Q (source-eigenvalue form)."""
    s = spectrum
    return (s.lambda_x * lambda_q / (s.lambda_x + lambda_q)
            + (L - 1) * s.gamma_x * lambda_q / (s.gamma_x + lambda_q)) / L


def _correlated_normal(cols_s, cols_t, sigma_sq: float, rho: float,
                       theta: np.ndarray) -> np.ndarray:
    """One symmetric Gaussian block from standard-normal columns.

    For rho >= 0 the two-factor construction sqrt(rho sigma^2) S
    + sqrt((1-rho) sigma^2) T_l is used; for rho < 0 (where the common
    factor's variance would be negative) the block is synthesized in the
    eigenbasis from the T columns and rotated by theta.  Both paths
    produce the same law; they consume the same column layout so streams
    stay reproducible.
    """
    if sigma_sq == 0.0:
        return np.zeros_like(cols_t)
    L = cols_t.shape[1]
    if rho >= 0.0:
        return (math.sqrt(rho * sigma_sq) * cols_s[:, None]
                + math.sqrt((1.0 - rho) * sigma_sq) * cols_t)
    lam = (1.0 + (L - 1) * rho) * sigma_sq
    gam = (1.0 - rho) * sigma_sq
    scales = np.full(L, math.sqrt(gam))
    scales[0] = math.sqrt(max(lam, 0.0))
    return (cols_t * scales) @ theta.T


def _sample_block(config: SimConfig, block_index: int, n_b: int,
                  theta: np.ndarray):
    """Draw block block_index: (X, Z, Q), each (n_b, L), coordinate basis."""
    L = config.spec.L
    key = np.array([config.seed & 0xFFFFFFFFFFFFFFFF, block_index],
                   dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    w = rng.standard_normal((n_b, 3 * L + 2))
    # Column layout: [S_x | T_x (L) | S_z | T_z (L) | Q (L)].
    x = _correlated_normal(w[:, 0], w[:, 1:L + 1],
                           config.spec.sigma_x_sq, config.spec.rho_x, theta)
    z = _correlated_normal(w[:, L + 1], w[:, L + 2:2 * L + 2],
                           config.spec.sigma_z_sq, config.spec.rho_z, theta)
    q = math.sqrt(config.lambda_q) * w[:, 2 * L + 2:]
    return x, z, q


def _blocks(n: int):
    index = 0
    done = 0
    while done < n:
        n_b = min(BLOCK_SIZE, n - done)
        yield index, n_b
        index += 1
        done += n_b


def sample_model(config: SimConfig):
    """Draw the full configured batch: arrays X, Z, Q of shape (n_samples, L).

    Deterministic in config.seed; the same seed always yields the same
    arrays regardless of platform.  Raises ValidationError for a bad
    config.
    """
    _validate_config(config)
    theta = eigenbasis(config.spec.L)
    xs, zs, qs = [], [], []
    for index, n_b in _blocks(config.n_samples):
        x, z, q = _sample_block(config, index, n_b, theta)
        xs.append(x)
        zs.append(z)
        qs.append(q)
    return np.concatenate(xs), np.concatenate(zs), np.concatenate(qs)


@functools.lru_cache(maxsize=4)
def run_simulation(config: SimConfig) -> SimResult:
    """Run the full blocked simulation and return all measurements.

    Accumulates, per block: sums and squared sums of the per-sample
    distortion for both estimators (Y-routed and direct), and the raw
    second-moment matrix of (Y, V) for the mutual-information estimate.
    Cross-block reduction uses math.fsum.  Results are cached on the
    config, so the distortion and rate accessors share one pass.
    """
    spectrum = _validate_config(config)
    spec = config.spec
    L, n, lam_q = spec.L, config.n_samples, config.lambda_q
    theta = eigenbasis(L)

    gains_routed = np.full(L, spectrum.gamma_x / (spectrum.gamma_y + lam_q))
    gains_routed[0] = spectrum.lambda_x / (spectrum.lambda_y + lam_q)
    gains_direct = np.full(L, spectrum.gamma_x / (spectrum.gamma_x + lam_q)
                           if spectrum.gamma_x > 0.0 else 0.0)
    gains_direct[0] = (spectrum.lambda_x / (spectrum.lambda_x + lam_q)
                       if spectrum.lambda_x > 0.0 else 0.0)

    d_sums, d_sq_sums = [], []
    d2_sums = []
    moment_blocks = []
    for index, n_b in _blocks(n):
        x, z, q = _sample_block(config, index, n_b, theta)
        xe = x @ theta
        ye = xe + z @ theta
        qe = q @ theta
        ve = ye + qe
        err = xe - gains_routed * ve
        d = np.einsum("ij,ij->i", err, err) / L
        err2 = xe - gains_direct * (xe + qe)
        d2 = np.einsum("ij,ij->i", err2, err2) / L
        d_sums.append(float(np.sum(d)))
        d_sq_sums.append(float(np.sum(d * d)))
        d2_sums.append(float(np.sum(d2)))
        w = np.hstack([ye, ve])
        moment_blocks.append(w.T @ w)

    d_total = math.fsum(d_sums)
    d_sq_total = math.fsum(d_sq_sums)
    mean = d_total / n
    if n > 1:
        var = max(d_sq_total - n * mean * mean, 0.0) / (n - 1)
        std_err = math.sqrt(var / n)
    else:
        std_err = 0.0
    direct_mean = math.fsum(d2_sums) / n

    moments = np.array([[math.fsum(b[i, j] for b in moment_blocks)
                         for j in range(2 * L)] for i in range(2 * L)]) / n
    sign_y, logdet_y = np.linalg.slogdet(moments[:L, :L])
    sign_v, logdet_v = np.linalg.slogdet(moments[L:, L:])
    sign_j, logdet_j = np.linalg.slogdet(moments)
    if min(sign_y, sign_v, sign_j) > 0.0:
        rate_empirical = 0.5 * (logdet_y + logdet_v - logdet_j)
    else:
        rate_empirical = math.nan

    closed = distortion_of(spectrum, L, lam_q)
    return SimResult(
        n_samples=n,
        lambda_q=lam_q,
        distortion_empirical=mean,
        distortion_closed_form=closed,
        distortion_direct_empirical=direct_mean,
        distortion_direct_closed_form=direct_mmse(spectrum, L, lam_q),
        rate_closed_form=rate_of(spectrum, L, lam_q),
        rate_empirical=rate_empirical,
        std_err=std_err,
        matches_routed_identity=abs(mean - closed) <= 4.0 * std_err,
    )


def empirical_distortion(config: SimConfig) -> float:
    """Empirical per-component distortion of the Y-routed estimator.

    Converges to the printed closed-form identity (and therefore to the
    distortion target the noise level was solved for) as n grows; the
    4-sigma agreement flag lives on run_simulation's result.
    """
    return run_simulation(config).distortion_empirical


def analytic_rate(config: SimConfig) -> float:
    """Closed-form rate of the test channel, cross-checked empirically.

    Returns the exact expression evaluated from the spectrum.  As a side
    effect the empirical mutual-information estimate from the same config
    is compared against it within a conservative concentration band
    (6 sqrt(8 L / n) + 50 L^2 / n nats); disagreement, or a sample
    covariance that is not positive definite (n too small for 2L x 2L
    moments), raises PrecisionError.
    """
    spectrum = _validate_config(config)
    closed = rate_of(spectrum, config.spec.L, config.lambda_q)
    result = run_simulation(config)
    if math.isnan(result.rate_empirical):
        raise PrecisionError(
            f"sample covariance not positive definite at n = {config.n_samples}; "
            "cannot estimate the empirical rate"
        )
    L, n = config.spec.L, config.n_samples
    band = 6.0 * math.sqrt(8.0 * L / n) + 50.0 * L * L / n
    if abs(result.rate_empirical - closed) > band:
        raise PrecisionError(
            f"empirical rate {result.rate_empirical!r} deviates from the "
            f"closed form {closed!r} beyond the statistical band {band!r}"
        )
    return closed
