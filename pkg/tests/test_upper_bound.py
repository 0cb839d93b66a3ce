"""Tests for the achievable (upper) rate bound.

Reference values marked "50-digit reference" were computed independently
with an mpmath program (bisection at 50 decimal digits on the distortion
constraint, plus the closed-form rate); frozen here as float literals.
"""

import numpy as np
import pytest

from symrd import (
    DomainError,
    SourceSpec,
    d_min,
    distortion_of,
    from_eigenvalues,
    quadratic_coefficients,
    quadratic_root,
    rate_alternative_forms,
    rate_of,
    solve_lambda_q,
    source_variance,
    spectral_decompose,
    upper_bound_rate,
)

L_CASES = 10
CASE1 = (0.8, 1.0, 5.0, 4.0)
CASE2 = (0.5, 1.0, 6.0, 3.0)
CASE3 = (1.0, 0.45, 12.0, 2.4)

# 50-digit reference: (case, D) -> (lambda_Q, rate in nats)
FROZEN_SOLUTIONS = [
    (CASE1, 0.85, 3.35647126829087463107618961374, 3.98717876611742376738466662754),
    (CASE2, 0.80, 3.11179272306450817162333481184, 3.57478036890575791300961150652),
    (CASE2, 0.71, 0.80826658385542106857195660343, 8.04066903912762667801128446631),
    (CASE3, 0.46, 2.38967804998823886840892718995, 4.02654670795793605557209882010),
    (CASE3, 0.495, 23.0891083048950653634865577813, 0.654270927190677709554153020019),
]


def _spectrum(eig):
    return spectral_decompose(from_eigenvalues(L_CASES, *eig))


@pytest.mark.parametrize("eig, D, lam_q, rate", FROZEN_SOLUTIONS)
def test_frozen_solutions(eig, D, lam_q, rate):
    s = _spectrum(eig)
    sol = solve_lambda_q(s, L_CASES, D)
    assert abs(sol.lambda_q - lam_q) <= 1e-11 * lam_q
    assert abs(sol.rate_nats - rate) <= 1e-11 * max(1.0, rate)
    assert abs(upper_bound_rate(s, L_CASES, D) - rate) <= 1e-11 * max(1.0, rate)


@pytest.mark.parametrize("eig, D, lam_q, rate", FROZEN_SOLUTIONS)
def test_distortion_round_trip(eig, D, lam_q, rate):
    s = _spectrum(eig)
    sol = solve_lambda_q(s, L_CASES, D)
    assert abs(distortion_of(s, L_CASES, sol.lambda_q) - D) <= 1e-10 * D


@pytest.mark.parametrize("eig, D, lam_q, rate", FROZEN_SOLUTIONS)
def test_rate_forms_agree(eig, D, lam_q, rate):
    # the three equivalent rate expressions (direct, via lambda_I, via
    # gamma_I) must agree
    s = _spectrum(eig)
    sol = solve_lambda_q(s, L_CASES, D)
    via_lambda, via_gamma = rate_alternative_forms(sol, s, L_CASES)
    assert abs(via_lambda - sol.rate_nats) <= 1e-10 * max(1.0, sol.rate_nats)
    assert abs(via_gamma - sol.rate_nats) <= 1e-10 * max(1.0, sol.rate_nats)


@pytest.mark.parametrize("eig, D, lam_q, rate", FROZEN_SOLUTIONS)
def test_quadratic_coefficient_identities(eig, D, lam_q, rate):
    # the phi-form and the correlation-form (g, h) coefficients describe
    # the same quadratic: b = g1 L^2 + g2 L and c = h1 L^2 + h2 L
    spec = from_eigenvalues(L_CASES, *eig)
    s = spectral_decompose(spec)
    q = quadratic_coefficients(spec, s, D)
    L = L_CASES
    assert abs(q.b - (q.g1 * L * L + q.g2 * L)) <= 1e-12 * max(1.0, abs(q.b))
    assert abs(q.c - (q.h1 * L * L + q.h2 * L)) <= 1e-12 * max(1.0, abs(q.c))
    # the bisection solution is a root of the quadratic
    residual = q.a * lam_q * lam_q + q.b * lam_q + q.c
    assert abs(residual) <= 1e-9 * max(abs(q.a) * lam_q * lam_q, abs(q.c))


@pytest.mark.parametrize("eig, D, lam_q, rate", FROZEN_SOLUTIONS)
def test_quadratic_root_matches_bisection(eig, D, lam_q, rate):
    spec = from_eigenvalues(L_CASES, *eig)
    s = spectral_decompose(spec)
    sol = solve_lambda_q(s, L_CASES, D)
    root = quadratic_root(quadratic_coefficients(spec, s, D))
    assert abs(root - sol.lambda_q) <= 1e-8 * sol.lambda_q


def test_distortion_of_monotone_and_bracketed():
    s = _spectrum(CASE1)
    dm = d_min(s, L_CASES)
    sx2 = source_variance(s, L_CASES)
    grid = np.geomspace(1e-6, 1e9, 40)
    vals = [distortion_of(s, L_CASES, lq) for lq in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[0] > dm and vals[-1] < sx2
    assert abs(vals[0] - dm) < 1e-5
    assert abs(vals[-1] - sx2) < 1e-5


def test_rate_monotone_decreasing_in_distortion():
    s = _spectrum(CASE2)
    dm = d_min(s, L_CASES)
    sx2 = source_variance(s, L_CASES)
    ds = dm + (sx2 - dm) * np.linspace(0.02, 0.98, 25)
    rates = [upper_bound_rate(s, L_CASES, float(D)) for D in ds]
    assert all(b < a for a, b in zip(rates, rates[1:]))


def test_rate_limits_at_interval_ends():
    s = _spectrum(CASE1)
    dm = d_min(s, L_CASES)
    sx2 = source_variance(s, L_CASES)
    near_top = solve_lambda_q(s, L_CASES, sx2 * (1.0 - 1e-8))
    assert near_top.lambda_q > 1e6
    assert near_top.rate_nats < 1e-5
    near_floor = solve_lambda_q(s, L_CASES, dm + (sx2 - dm) * 1e-6)
    assert near_floor.rate_nats > 5.0
    assert near_floor.lambda_q < 1e-3


@pytest.mark.parametrize("bad_d_of_range", [
    lambda dm, sx2: dm,                # at the floor
    lambda dm, sx2: sx2,               # at the variance
    lambda dm, sx2: dm - 0.01,
    lambda dm, sx2: sx2 + 0.01,
    lambda dm, sx2: 0.0,
])
def test_solve_rejects_out_of_range_distortion(bad_d_of_range):
    s = _spectrum(CASE1)
    D = bad_d_of_range(d_min(s, L_CASES), source_variance(s, L_CASES))
    with pytest.raises(DomainError):
        solve_lambda_q(s, L_CASES, D)


def test_quadratic_root_rejects_nonpositive_leading_coefficient():
    # a = L (sigma_x^2 - D) <= 0 means D is out of range for the quadratic
    spec = from_eigenvalues(L_CASES, *CASE1)
    s = spectral_decompose(spec)
    q = quadratic_coefficients(spec, s, source_variance(s, L_CASES) + 0.1)
    with pytest.raises(DomainError):
        quadratic_root(q)


def test_rate_of_zero_noise_limit():
    # lambda_q -> infinity drives the rate to 0 from above
    s = _spectrum(CASE3)
    assert 0.0 < rate_of(s, L_CASES, 1e12) < 1e-10


def test_randomized_consistency():
    # residual, three-way rate agreement and quadratic-vs-bisection on
    # randomized specs
    rng = np.random.default_rng(55901)
    for _ in range(300):
        L = int(rng.integers(2, 13))
        sx2 = float(10.0 ** rng.uniform(-1, 1))
        rx = float(rng.uniform(-0.95 / (L - 1), 0.95))
        sz2 = float(10.0 ** rng.uniform(-1, 1))
        rz = float(rng.uniform(-0.95 / (L - 1), 0.95))
        spec = SourceSpec(L, sx2, rx, sz2, rz)
        s = spectral_decompose(spec)
        dm = d_min(s, L)
        top = source_variance(s, L)
        D = dm + (top - dm) * float(rng.uniform(0.02, 0.98))
        sol = solve_lambda_q(s, L, D)
        assert abs(distortion_of(s, L, sol.lambda_q) - D) <= 1e-10 * D
        via_lambda, via_gamma = rate_alternative_forms(sol, s, L)
        scale = max(1.0, sol.rate_nats)
        assert abs(via_lambda - sol.rate_nats) <= 1e-10 * scale
        assert abs(via_gamma - sol.rate_nats) <= 1e-10 * scale
        root = quadratic_root(quadratic_coefficients(spec, s, D))
        assert abs(root - sol.lambda_q) <= 1e-8 * sol.lambda_q
