"""Tests for the large-L asymptotic rate expressions.

Reference values marked "50-digit reference" were computed independently
with an mpmath program evaluating the limiting expressions at 50 decimal
digits; frozen here as float literals.
"""

import math

import pytest

from symrd import (
    Condition,
    DomainError,
    SourceSpec,
    asymptotic_gap,
    asymptotic_regime,
    expansion_coefficients,
    from_eigenvalues,
    lower_asymptotic,
    spectral_decompose,
    upper_asymptotic,
    upper_bound_rate,
)

# the gapped reference spec: rho_Y = 0.5, sigma_Y^2 = 5
GAPPED = SourceSpec(500, 1.0, 0.3, 4.0, 0.55)
ZERO_MIX = SourceSpec(10, 1.0, 0.0, 4.0, 0.0)
ZERO_RHO_X = SourceSpec(500, 1.0, 0.0, 4.0, 0.5)

# 50-digit reference: regime constants of the gapped spec.
GAPPED_XI = 0.428571428571428571428571428571            # = 3/7
GAPPED_D_MIN_INF = 0.768
GAPPED_D_TH0_INF = 0.964
GAPPED_D_TH1_INF = 0.815522282143504149896330902255
GAPPED_D_TH2_INF = 0.916477717856495850103669097745
GAPPED_GAP_AT_087 = 0.0212769488712456505365620690958

# 50-digit reference: rate values at L = 500.
GAPPED_UPPER_AT_087 = 166.030570449190582291651333144
GAPPED_LOWER_AT_087 = 166.009293500319336641114771075
GAPPED_UPPER_AT_TH0 = 5.50320998497271996804827946487
GAPPED_UPPER_AT_097 = 3.39587973461402750040623867919
ZERO_MIX_UPPER_AT_085 = 6.93147180559945309417232121458  # = 10 ln 2
ZERO_RHO_X_LOWER_AT_080 = 229.822682968538766295881802942

# 50-digit reference: test-channel expansion coefficients of the gapped spec.
GAPPED_ETA1_AT_087 = 2.71276595744680851063829787234
GAPPED_ETA2_AT_087 = -0.0589946351001223235699218862872
GAPPED_ALPHA1_AT_TH0 = 5.83333333333333333333333333333    # = 35/6
GAPPED_ALPHA2_AT_TH0 = 10.1388888888888888888888888889    # = 365/36
GAPPED_BETA1_AT_097 = 0.5


def test_regime_classification():
    reg = asymptotic_regime(GAPPED)
    assert reg.condition == Condition.PosMixPosRho_XiLtHalf
    assert abs(reg.xi - GAPPED_XI) < 1e-15
    zm = asymptotic_regime(ZERO_MIX)
    assert zm.condition == Condition.ZeroMix
    assert zm.xi is None
    zr = asymptotic_regime(ZERO_RHO_X)
    assert zr.condition == Condition.PosMixZeroRho
    high = asymptotic_regime(SourceSpec(500, 1.0, 0.6, 4.0, 0.55))
    assert high.condition == Condition.PosMixPosRho_XiGeHalf
    assert high.xi >= 0.5


def test_regime_thresholds():
    reg = asymptotic_regime(GAPPED)
    assert abs(reg.d_min_inf - GAPPED_D_MIN_INF) < 1e-14
    assert abs(reg.d_th0_inf - GAPPED_D_TH0_INF) < 1e-14
    assert abs(reg.d_th1_inf - GAPPED_D_TH1_INF) < 1e-14
    assert abs(reg.d_th2_inf - GAPPED_D_TH2_INF) < 1e-14
    # the two gap endpoints bracket nothing in the other regimes
    zm = asymptotic_regime(ZERO_MIX)
    assert zm.d_th1_inf is None and zm.d_th2_inf is None
    assert abs(zm.d_min_inf - 0.8) < 1e-15   # = sx2 sz2 / (sx2 + sz2)
    zr = asymptotic_regime(ZERO_RHO_X)
    assert abs(zr.d_min_inf - 2.0 / 3.0) < 1e-15


def test_rejects_negative_correlations():
    # valid finite-L specs, but the limiting expressions only cover
    # nonnegative correlations
    with pytest.raises(DomainError) as exc:
        asymptotic_regime(SourceSpec(500, 1.0, -0.001, 4.0, 0.1))
    assert "finite-L" in str(exc.value)
    with pytest.raises(DomainError):
        upper_asymptotic(SourceSpec(500, 1.0, 0.3, 4.0, -0.001), 500, 0.9)


def test_rejects_unit_rho_x_with_positive_mix():
    with pytest.raises(DomainError):
        asymptotic_regime(SourceSpec(500, 1.0, 1.0, 4.0, 0.5))


def test_frozen_upper_values():
    assert abs(upper_asymptotic(GAPPED, 500, 0.87)
               - GAPPED_UPPER_AT_087) <= 1e-9 * GAPPED_UPPER_AT_087
    reg = asymptotic_regime(GAPPED)
    assert abs(upper_asymptotic(GAPPED, 500, reg.d_th0_inf)
               - GAPPED_UPPER_AT_TH0) <= 1e-10 * GAPPED_UPPER_AT_TH0
    assert abs(upper_asymptotic(GAPPED, 500, 0.97)
               - GAPPED_UPPER_AT_097) <= 1e-10 * GAPPED_UPPER_AT_097
    assert abs(upper_asymptotic(ZERO_MIX, 10, 0.85)
               - ZERO_MIX_UPPER_AT_085) <= 1e-12 * ZERO_MIX_UPPER_AT_085


def test_frozen_lower_values():
    assert abs(lower_asymptotic(GAPPED, 500, 0.87)
               - GAPPED_LOWER_AT_087) <= 1e-9 * GAPPED_LOWER_AT_087
    assert abs(lower_asymptotic(ZERO_RHO_X, 500, 0.80)
               - ZERO_RHO_X_LOWER_AT_080) <= 1e-9 * ZERO_RHO_X_LOWER_AT_080


def test_lower_equals_upper_outside_gap_interval():
    reg = asymptotic_regime(GAPPED)
    for D in (0.80, reg.d_th1_inf, reg.d_th2_inf, 0.95):
        up = upper_asymptotic(GAPPED, 500, D)
        lo = lower_asymptotic(GAPPED, 500, D)
        assert abs(lo - up) <= 1e-12 * max(1.0, up)
    # strictly inside the interval the lower bound is strictly smaller
    assert lower_asymptotic(GAPPED, 500, 0.87) \
        < upper_asymptotic(GAPPED, 500, 0.87)


def test_high_contrast_regime_has_no_gap():
    spec = SourceSpec(500, 1.0, 0.6, 4.0, 0.55)
    reg = asymptotic_regime(spec)
    dm = reg.d_min_inf
    for frac in (0.2, 0.5, 0.8):
        D = dm + (spec.sigma_x_sq - dm) * frac
        up = upper_asymptotic(spec, 500, D)
        lo = lower_asymptotic(spec, 500, D)
        assert abs(lo - up) <= 1e-12 * max(1.0, up)


def test_zero_mix_lower_equals_upper():
    for D in (0.85, 0.95):
        up = upper_asymptotic(ZERO_MIX, 10, D)
        lo = lower_asymptotic(ZERO_MIX, 10, D)
        assert abs(lo - up) <= 1e-12 * max(1.0, up)


def test_zero_mix_formula_is_exact_at_finite_l():
    # with both correlations at zero the limiting expression carries no
    # remainder term: it equals the finite-L bound for every L
    for L in (2, 7, 40):
        spec = SourceSpec(L, 1.0, 0.0, 4.0, 0.0)
        s = spectral_decompose(spec)
        for D in (0.82, 0.9, 0.98):
            exact = upper_bound_rate(s, L, D)
            lim = upper_asymptotic(spec, L, D)
            assert abs(exact - lim) <= 1e-10 * max(1.0, exact)


def test_gap_frozen_value_and_endpoints():
    assert abs(asymptotic_gap(GAPPED, 0.87) - GAPPED_GAP_AT_087) < 1e-13
    reg = asymptotic_regime(GAPPED)
    assert abs(asymptotic_gap(GAPPED, reg.d_th1_inf)) <= 1e-10
    assert abs(asymptotic_gap(GAPPED, reg.d_th2_inf)) <= 1e-10
    # outside the interval the gap is exactly zero
    assert asymptotic_gap(GAPPED, 0.80) == 0.0
    assert asymptotic_gap(GAPPED, 0.95) == 0.0
    assert asymptotic_gap(GAPPED, 0.87) > 0.0


def test_gap_requires_gapped_regime():
    with pytest.raises(DomainError):
        asymptotic_gap(ZERO_MIX, 0.85)
    with pytest.raises(DomainError):
        asymptotic_gap(ZERO_RHO_X, 0.80)
    with pytest.raises(DomainError):
        asymptotic_gap(SourceSpec(500, 1.0, 0.6, 4.0, 0.55), 0.9)


def test_threshold_window_routes_to_sqrt_l_expression():
    # distortions within the floating-point window around d_th0 evaluate the
    # sqrt(L) expression, whose value does not depend on the exact D
    reg = asymptotic_regime(GAPPED)
    near = reg.d_th0_inf * (1.0 + 1e-14)
    got = upper_asymptotic(GAPPED, 500, near)
    assert abs(got - GAPPED_UPPER_AT_TH0) <= 1e-10 * GAPPED_UPPER_AT_TH0


def test_expansion_coefficients_frozen():
    c = expansion_coefficients(GAPPED, 0.87)
    assert abs(c.eta1 - GAPPED_ETA1_AT_087) < 1e-13
    assert abs(c.eta2 - GAPPED_ETA2_AT_087) < 1e-13
    reg = asymptotic_regime(GAPPED)
    at_th0 = expansion_coefficients(GAPPED, reg.d_th0_inf)
    assert abs(at_th0.alpha1 - GAPPED_ALPHA1_AT_TH0) < 1e-12
    assert abs(at_th0.alpha2 - GAPPED_ALPHA2_AT_TH0) < 1e-11
    # the 1/L series is singular exactly at d_th0 (its leading coefficient
    # has a zero denominator there)
    assert at_th0.eta1 is None and at_th0.eta2 is None
    above = expansion_coefficients(GAPPED, 0.97)
    assert abs(above.beta1 - GAPPED_BETA1_AT_097) < 1e-13


def test_d_range_domain_errors():
    reg = asymptotic_regime(GAPPED)
    with pytest.raises(DomainError):
        upper_asymptotic(GAPPED, 500, reg.d_min_inf)
    with pytest.raises(DomainError):
        upper_asymptotic(GAPPED, 500, GAPPED.sigma_x_sq)
    with pytest.raises(DomainError):
        lower_asymptotic(GAPPED, 500, reg.d_min_inf - 0.01)
    with pytest.raises(DomainError):
        asymptotic_gap(GAPPED, GAPPED.sigma_x_sq + 0.01)


def test_finite_l_error_decays_in_gap_interval():
    # the limiting expressions approximate the finite-L bounds with an
    # error that shrinks roughly like 1/L
    s250 = spectral_decompose(SourceSpec(250, 1.0, 0.3, 4.0, 0.55))
    s500 = spectral_decompose(SourceSpec(500, 1.0, 0.3, 4.0, 0.55))
    e250 = abs(upper_bound_rate(s250, 250, 0.87)
               - upper_asymptotic(SourceSpec(250, 1.0, 0.3, 4.0, 0.55), 250, 0.87))
    e500 = abs(upper_bound_rate(s500, 500, 0.87)
               - upper_asymptotic(GAPPED, 500, 0.87))
    assert 1.6 <= e250 / e500 <= 2.4
