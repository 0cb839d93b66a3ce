"""Symmetric Gaussian source model: parameterization and spectral structure.

A block of L sources is observed in additive noise,

    Y_l = X_l + Z_l,  l = 1..L,

where X and Z are independent zero-mean Gaussian vectors whose covariances
share the symmetric pattern sigma^2 * [(1 - rho) I + rho J] (J the all-ones
matrix).  Every such matrix has the two-eigenvalue spectrum

    lambda = (1 + (L - 1) rho) sigma^2   (multiplicity 1, eigenvector 1/sqrt(L)),
    gamma  = (1 - rho) sigma^2           (multiplicity L - 1),

and all downstream rate computations work directly on the eigenvalue pairs
(lambda_x, gamma_x) and (lambda_y, gamma_y) = (lambda_x + lambda_z,
gamma_x + gamma_z).  This module owns the conversion in both directions,
validity checking, the distortion floor d_min, and the plain-text spec file
format consumed by the command line tool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Absolute slack applied to inequality checks so that boundary cases
# produced by floating-point arithmetic (rho = 1 computed as 1 + 2e-16,
# a noise eigenvalue of -1e-17, ...) are accepted and clamped instead of
# rejected.
VALIDATION_SLACK = 1e-12


@dataclass(frozen=True)
class SourceSpec:
    """Correlation-form description of the source/noise pair.

    Parameters
    ----------
    L : int
        Number of sources, at least 2.
    sigma_x_sq : float
        Per-component source variance, strictly positive.
    rho_x : float
        Source correlation coefficient, in [-1/(L-1), 1].
    sigma_z_sq : float
        Per-component noise variance, nonnegative (0 means noiseless
        observations).
    rho_z : float
        Noise correlation coefficient, in [-1/(L-1), 1].  Ignored in
        substance when sigma_z_sq = 0, but still range-checked.
    """

    L: int
    sigma_x_sq: float
    rho_x: float
    sigma_z_sq: float
    rho_z: float

    @property
    def sigma_y_sq(self) -> float:
        """Per-component variance of the observation Y = X + Z."""
        return self.sigma_x_sq + self.sigma_z_sq

    @property
    def rho_y(self) -> float:
        """Correlation coefficient of Y (variance-weighted mix of rho_x, rho_z)."""
        return (self.rho_x * self.sigma_x_sq + self.rho_z * self.sigma_z_sq) / self.sigma_y_sq


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of the three symmetric covariances (X, Z, Y = X + Z).

    lambda_* is the multiplicity-1 eigenvalue along 1/sqrt(L) * (1, ..., 1);
    gamma_* the multiplicity-(L-1) eigenvalue on its orthogonal complement.
    Sums hold componentwise: lambda_y = lambda_x + lambda_z and likewise
    for gamma.
    """

    lambda_x: float
    gamma_x: float
    lambda_z: float
    gamma_z: float
    lambda_y: float
    gamma_y: float

    @property
    def lambda_w(self) -> float:
        """min(lambda_y, gamma_y): the decomposition noise level used by the
        converse program."""
        return min(self.lambda_y, self.gamma_y)


def _check_rho(name: str, rho: float, L: int) -> None:
    lo = -1.0 / (L - 1)
    if rho < lo - VALIDATION_SLACK or rho > 1.0 + VALIDATION_SLACK:
        raise ValidationError(
            f"{name} = {rho!r} outside [-1/(L-1), 1] = [{lo!r}, 1] for L = {L}"
        )


def validate_spec(spec: SourceSpec) -> None:
    """Check all model invariants, raising ValidationError on the first failure.

    The checks are: L is an integer >= 2; sigma_x_sq > 0; sigma_z_sq >= 0;
    both correlation coefficients lie in [-1/(L-1), 1] (up to
    VALIDATION_SLACK); and the observation spectrum is nondegenerate,
    min(lambda_y, gamma_y) > 0.
    """
    if not isinstance(spec.L, (int, np.integer)) or isinstance(spec.L, bool):
        raise ValidationError(f"L must be an integer, got {spec.L!r}")
    if spec.L < 2:
        raise ValidationError(f"L must be at least 2, got {spec.L}")
    if not spec.sigma_x_sq > 0.0:
        raise ValidationError(f"sigma_x_sq must be positive, got {spec.sigma_x_sq!r}")
    if spec.sigma_z_sq < -VALIDATION_SLACK:
        raise ValidationError(f"sigma_z_sq must be nonnegative, got {spec.sigma_z_sq!r}")
    _check_rho("rho_x", spec.rho_x, spec.L)
    _check_rho("rho_z", spec.rho_z, spec.L)
    s = spectral_decompose(spec, _validate=False)
    if not (s.lambda_y > 0.0 and s.gamma_y > 0.0):
        raise ValidationError(
            "observation spectrum is degenerate: needs min(lambda_y, gamma_y) > 0, "
            f"got lambda_y = {s.lambda_y!r}, gamma_y = {s.gamma_y!r}"
        )


def _eig_pair(L: int, sigma_sq: float, rho: float) -> tuple[float, float]:
    lam = (1.0 + (L - 1) * rho) * sigma_sq
    gam = (1.0 - rho) * sigma_sq
    # Clamp the roundoff shadow of a boundary rho; validation has already
    # rejected genuinely negative eigenvalues.
    return max(lam, 0.0), max(gam, 0.0)


def spectral_decompose(spec: SourceSpec, _validate: bool = True) -> Spectrum:
    """Map a correlation-form spec to its covariance eigenvalues.

    Returns a Spectrum with lambda/gamma for X, Z and Y = X + Z.  Validates
    the spec first (raise ValidationError) unless ``_validate`` is False,
    which is used internally to break the validate/decompose cycle.
    """
    if _validate:
        validate_spec(spec)
    lx, gx = _eig_pair(spec.L, spec.sigma_x_sq, spec.rho_x)
    sz = max(spec.sigma_z_sq, 0.0)
    lz, gz = _eig_pair(spec.L, sz, spec.rho_z) if sz > 0.0 else (0.0, 0.0)
    return Spectrum(lx, gx, lz, gz, lx + lz, gx + gz)


def from_eigenvalues(
    L: int, lambda_x: float, gamma_x: float, lambda_y: float, gamma_y: float
) -> SourceSpec:
    """Invert the eigenvalue description back to a correlation-form spec.

    The noise spectrum is lambda_z = lambda_y - lambda_x and
    gamma_z = gamma_y - gamma_x, so the inputs must satisfy
    lambda_y >= lambda_x >= 0 and gamma_y >= gamma_x >= 0 (up to
    VALIDATION_SLACK), with min(lambda_y, gamma_y) > 0 and lambda_x,
    gamma_x not both zero.  The returned spec round-trips through
    spectral_decompose to 1e-12 relative accuracy.

    Raises
    ------
    ValidationError
        If the eigenvalues violate the constraints above.
    """
    if not isinstance(L, (int, np.integer)) or isinstance(L, bool):
        raise ValidationError(f"L must be an integer, got {L!r}")
    if L < 2:
        raise ValidationError(f"L must be at least 2, got {L}")
    scale = max(abs(lambda_x), abs(gamma_x), abs(lambda_y), abs(gamma_y), 1.0)
    slack = VALIDATION_SLACK * scale
    for name, v in (("lambda_x", lambda_x), ("gamma_x", gamma_x),
                    ("lambda_y", lambda_y), ("gamma_y", gamma_y)):
        if v < -slack:
            raise ValidationError(f"{name} must be nonnegative, got {v!r}")
    lx, gx = max(lambda_x, 0.0), max(gamma_x, 0.0)
    ly, gy = max(lambda_y, 0.0), max(gamma_y, 0.0)
    if not (ly > 0.0 and gy > 0.0):
        raise ValidationError(
            f"need min(lambda_y, gamma_y) > 0, got lambda_y = {ly!r}, gamma_y = {gy!r}"
        )
    if ly - lx < -slack:
        raise ValidationError(
            f"lambda_y = {ly!r} smaller than lambda_x = {lx!r}: negative noise eigenvalue"
        )
    if gy - gx < -slack:
        raise ValidationError(
            f"gamma_y = {gy!r} smaller than gamma_x = {gx!r}: negative noise eigenvalue"
        )
    if lx == 0.0 and gx == 0.0:
        raise ValidationError("lambda_x and gamma_x cannot both be zero (no source)")

    sigma_x_sq = (lx + (L - 1) * gx) / L
    rho_x = (lx - gx) / (L * sigma_x_sq)
    lz = max(ly - lx, 0.0)
    gz = max(gy - gx, 0.0)
    sigma_z_sq = (lz + (L - 1) * gz) / L
    rho_z = (lz - gz) / (L * sigma_z_sq) if sigma_z_sq > 0.0 else 0.0
    # Roundoff can push a boundary correlation a few ulp outside its range;
    # pull it back so the result always validates.
    lo = -1.0 / (L - 1)
    rho_x = min(max(rho_x, lo), 1.0)
    rho_z = min(max(rho_z, lo), 1.0)
    spec = SourceSpec(int(L), sigma_x_sq, rho_x, sigma_z_sq, rho_z)
    validate_spec(spec)
    return spec


def d_min(spectrum: Spectrum, L: int) -> float:
    """Distortion floor: the remote-source MMSE per component.

    d_min = lambda_x lambda_z / (L lambda_y)
          + (L - 1) gamma_x gamma_z / (L gamma_y).

    No rate, however large, can push the per-component distortion below
    this value, because X is only observable through Y.
    """
    s = spectrum
    return (s.lambda_x * s.lambda_z / s.lambda_y
            + (L - 1) * s.gamma_x * s.gamma_z / s.gamma_y) / L


def source_variance(spectrum: Spectrum, L: int) -> float:
    """Per-component source variance sigma_x^2 = (lambda_x + (L-1) gamma_x) / L.

    This is the distortion delivered at zero rate, i.e. the right edge of
    the nontrivial distortion interval (d_min, sigma_x^2).
    """
    return (spectrum.lambda_x + (L - 1) * spectrum.gamma_x) / L


def covariance_matrix(L: int, sigma_sq: float, rho: float) -> np.ndarray:
    """Explicit L x L symmetric covariance sigma^2 [(1 - rho) I + rho J]."""
    return sigma_sq * ((1.0 - rho) * np.eye(L) + rho * np.ones((L, L)))


def eigenbasis(L: int) -> np.ndarray:
    """Deterministic orthonormal basis diagonalizing every symmetric covariance.

    Column 0 is 1/sqrt(L) * (1, ..., 1); the remaining columns are produced
    by Gram-Schmidt on the standard basis, so the same L always yields the
    same matrix.  For any Spectrum s of size L,

        eigenbasis(L).T @ covariance_matrix(L, sigma_sq, rho) @ eigenbasis(L)
            == diag(lambda, gamma, ..., gamma).
    """
    theta = np.zeros((L, L))
    theta[:, 0] = 1.0 / math.sqrt(L)
    k = 1
    for j in range(L):
        if k == L:
            break
        v = np.zeros(L)
        v[j] = 1.0
        for i in range(k):
            v -= (theta[:, i] @ v) * theta[:, i]
        norm = float(np.linalg.norm(v))
        if norm > 1e-10:
            theta[:, k] = v / norm
            k += 1
    return theta


# --- spec file format -------------------------------------------------------
#
# Flat "key = value" lines, '#' starts a comment, blank lines ignored.
# Required: the key L plus exactly one complete parameter family, either
# correlation form {sigma_x_sq, rho_x, sigma_z_sq, rho_z} or eigenvalue
# form {lambda_x, gamma_x, lambda_y, gamma_y}.

_CORR_KEYS = ("sigma_x_sq", "rho_x", "sigma_z_sq", "rho_z")
_EIG_KEYS = ("lambda_x", "gamma_x", "lambda_y", "gamma_y")


def parse_spec_text(text: str, name: str = "<spec>") -> SourceSpec:
    """Parse the key = value spec format into a validated SourceSpec.

    Parameters
    ----------
    text : str
        File contents.
    name : str
        Label used in diagnostics (typically the file path).

    Raises
    ------
    ValidationError
        On any syntax problem (with the 1-based line number), unknown or
        duplicate key, mixed or incomplete parameter family, or a spec
        that fails model validation.
    """
    values: dict[str, float] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{name}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key != "L" and key not in _CORR_KEYS and key not in _EIG_KEYS:
            raise ValidationError(f"{name}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ValidationError(
                f"{name}:{lineno}: duplicate key {key!r} (first set on line {lines[key]})"
            )
        try:
            values[key] = float(val)
        except ValueError:
            raise ValidationError(f"{name}:{lineno}: cannot parse value {val!r} for key {key!r}")
        lines[key] = lineno

    if "L" not in values:
        raise ValidationError(f"{name}: missing required key 'L'")
    L_raw = values.pop("L")
    if L_raw != int(L_raw):
        raise ValidationError(f"{name}:{lines['L']}: L must be an integer, got {L_raw!r}")
    L = int(L_raw)

    have_corr = [k for k in _CORR_KEYS if k in values]
    have_eig = [k for k in _EIG_KEYS if k in values]
    if have_corr and have_eig:
        raise ValidationError(
            f"{name}: mixed parameter families: correlation keys {have_corr} "
            f"with eigenvalue keys {have_eig}"
        )
    if have_corr:
        missing = [k for k in _CORR_KEYS if k not in values]
        if missing:
            raise ValidationError(f"{name}: incomplete correlation family, missing {missing}")
        spec = SourceSpec(L, values["sigma_x_sq"], values["rho_x"],
                          values["sigma_z_sq"], values["rho_z"])
        validate_spec(spec)
        return spec
    if have_eig:
        missing = [k for k in _EIG_KEYS if k not in values]
        if missing:
            raise ValidationError(f"{name}: incomplete eigenvalue family, missing {missing}")
        return from_eigenvalues(L, values["lambda_x"], values["gamma_x"],
                                values["lambda_y"], values["gamma_y"])
    raise ValidationError(
        f"{name}: no parameter family given; need {_CORR_KEYS} or {_EIG_KEYS}"
    )
