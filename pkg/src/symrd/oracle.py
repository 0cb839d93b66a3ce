"""Numerical solver for the converse minimization program, with KKT certificates.

The lower bound comes from minimizing

    Omega(alpha, beta, delta) =
        1/2 log[ lambda_y^2 / ((lambda_y - lambda_w) alpha + lambda_y lambda_w) ]
      + (L-1)/2 log[ gamma_y^2 / ((gamma_y - lambda_w) beta + gamma_y lambda_w) ]
      + L/2 log(lambda_w / delta)

over 0 < alpha <= lambda_y, 0 < beta <= gamma_y, delta > 0, subject to the
two envelope constraints

    delta <= (1/alpha + 1/lambda_w - 1/lambda_y)^{-1},
    delta <= (1/beta  + 1/lambda_w - 1/gamma_y)^{-1},

and the distortion constraint

    lambda_x^2/lambda_y^2 alpha + lambda_x - lambda_x^2/lambda_y
      + (L-1)(gamma_x^2/gamma_y^2 beta + gamma_x - gamma_x^2/gamma_y) <= L D,

where lambda_w = min(lambda_y, gamma_y).  Because lambda_w equals one of
the two observation eigenvalues, one log term is constant and its envelope
constraint pins that variable to delta, collapsing the program to one free
variable plus delta; delta itself is then optimal on the boundary
delta = min(envelope, distortion cap).  The solver runs golden-section
search on the remaining variable and certifies the result through the
five-condition KKT system (two stationarity equations, three
complementary-slackness products with nonnegative multipliers).

This module is deliberately independent of the closed-form lower bound: it
never consults the regime classification, so agreement between the two is
a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .model import Spectrum, d_min, source_variance

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi

# Outer golden-section iterations.  The bracket shrinks by 1/phi per step,
# so 200 steps leave an interval ~4e-42 times the initial one; the limiting
# factor is float64 noise near the flat bottom, not the budget.
GSS_ITERS = 200

#: Default value tolerance requested from solve_program.
DEFAULT_TOL = 1e-9

# Residual level at which a KKT certificate is accepted as demonstrating
# optimality; beyond it solve_program raises ConvergenceError.
CERTIFICATE_TOL = 1e-6

# Relative slack when deciding which constraints are active during
# multiplier recovery.
_ACTIVE_TOL = 1e-7


@dataclass(frozen=True)
class ProgramPoint:
    """Decision variables (alpha, beta, delta) of the converse program."""

    alpha: float
    beta: float
    delta: float


@dataclass(frozen=True)
class KktCertificate:
    """Multipliers and residuals of the five-condition optimality system.

    stationarity_residual is the max absolute residual of the two
    stationarity equations of the reduced program; complementarity_residual
    the max absolute product multiplier * constraint-slack.  Both are ~0 at
    a true optimum with correctly recovered multipliers.
    """

    omega1: float
    omega2: float
    omega3: float
    stationarity_residual: float
    complementarity_residual: float


def omega_objective(p: ProgramPoint, spectrum: Spectrum, L: int) -> float:
    """Evaluate Omega at p in nats.

    Raises DomainError if any logarithm argument is nonpositive (p far
    outside the feasible box).
    """
    s = spectrum
    lw = s.lambda_w
    arg1 = (s.lambda_y - lw) * p.alpha + s.lambda_y * lw
    arg2 = (s.gamma_y - lw) * p.beta + s.gamma_y * lw
    if not arg1 > 0.0:
        raise DomainError(f"alpha log argument {arg1!r} is not positive")
    if not arg2 > 0.0:
        raise DomainError(f"beta log argument {arg2!r} is not positive")
    if not p.delta > 0.0:
        raise DomainError(f"delta = {p.delta!r} is not positive")
    return (0.5 * math.log(s.lambda_y ** 2 / arg1)
            + (L - 1) / 2.0 * math.log(s.gamma_y ** 2 / arg2)
            + L / 2.0 * math.log(lw / p.delta))


def distortion_constraint(p: ProgramPoint, spectrum: Spectrum, L: int) -> float:
    """Left side of the distortion constraint at p (compare against L D)."""
    s = spectrum
    return (s.lambda_x ** 2 / s.lambda_y ** 2 * p.alpha
            + s.lambda_x - s.lambda_x ** 2 / s.lambda_y
            + (L - 1) * (s.gamma_x ** 2 / s.gamma_y ** 2 * p.beta
                         + s.gamma_x - s.gamma_x ** 2 / s.gamma_y))


def _gss_min(fun, lo: float, hi: float, iters: int = GSS_ITERS):
    """Golden-section minimum of a unimodal fun on [lo, hi].

    Returns (value, argmin) over the four points still in hand at the end,
    so boundary minima are not lost.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fun(d)
    candidates = [(fun(a), a), (fc, c), (fd, d), (fun(b), b)]
    return min(candidates, key=lambda t: t[0])


def _solve_reduced(spectrum: Spectrum, L: int, D: float) -> ProgramPoint:
    """Golden-section solve of the envelope-reduced program; both sides."""
    s = spectrum
    lx, gx, ly, gy = s.lambda_x, s.gamma_x, s.lambda_y, s.gamma_y
    base = lx - lx ** 2 / ly + (L - 1) * (gx - gx ** 2 / gy)
    target = L * D

    if ly >= gy:
        # lambda side: free variable alpha, beta pinned to delta.
        def delta_star(a):
            env = 1.0 / (1.0 / a + 1.0 / gy - 1.0 / ly)
            slack = target - base - lx ** 2 / ly ** 2 * a
            if gx > 0.0:
                cap = slack * gy ** 2 / ((L - 1) * gx ** 2)
            else:
                cap = math.inf if slack >= 0.0 else -1.0
            return min(env, cap)

        def g(a):
            ds = delta_star(a)
            if ds <= 0.0:
                return math.inf
            return (0.5 * math.log(ly ** 2 / ((ly - gy) * a + ly * gy))
                    + L / 2.0 * math.log(gy / ds))

        hi = ly
        if lx > 0.0:
            a_sup = (target - base) * ly ** 2 / lx ** 2
            hi = min(hi, a_sup * (1.0 - 1e-12))
        _, a_star = _gss_min(g, hi * 1e-30, hi)
        d_star = delta_star(a_star)
        return ProgramPoint(a_star, d_star, d_star)

    # gamma side: free variable beta, alpha pinned to delta.
    def delta_star(b):
        env = 1.0 / (1.0 / b + 1.0 / ly - 1.0 / gy)
        slack = target - base - (L - 1) * gx ** 2 / gy ** 2 * b
        if lx > 0.0:
            cap = slack * ly ** 2 / lx ** 2
        else:
            cap = math.inf if slack >= 0.0 else -1.0
        return min(env, cap)

    def g(b):
        ds = delta_star(b)
        if ds <= 0.0:
            return math.inf
        return ((L - 1) / 2.0 * math.log(gy ** 2 / ((gy - ly) * b + ly * gy))
                + L / 2.0 * math.log(ly / ds))

    hi = gy
    if gx > 0.0:
        b_sup = (target - base) * gy ** 2 / ((L - 1) * gx ** 2)
        hi = min(hi, b_sup * (1.0 - 1e-12))
    _, b_star = _gss_min(g, hi * 1e-30, hi)
    d_star = delta_star(b_star)
    return ProgramPoint(d_star, b_star, d_star)


def recover_multipliers(
    p: ProgramPoint, spectrum: Spectrum, L: int, D: float
) -> tuple[float, float, float]:
    """Recover (omega1, omega2, omega3) from the active set at p.

    Uses the stationarity equations of the reduced program on the side
    selected by the spectrum: whichever constraints are (numerically)
    active at p determine which multipliers may be nonzero, and the
    stationarity equations are then solved exactly for them.  At a true
    optimum the recovered multipliers are nonnegative and the remaining
    residuals vanish; kkt_check reports both.
    """
    s = spectrum
    lx, gx, ly, gy = s.lambda_x, s.gamma_x, s.lambda_y, s.gamma_y
    d = p.delta
    if ly >= gy:
        a = p.alpha
        c = 1.0 / gy - 1.0 / ly
        env = 1.0 / (1.0 / a + c)
        env_active = abs(d - env) <= _ACTIVE_TOL * env
        box_active = abs(a - ly) <= _ACTIVE_TOL * ly
        if env_active:
            w1 = 0.0
            w3 = ((L / (2.0 * d) / (1.0 + c * a) ** 2 + c / 2.0 / (1.0 + c * a))
                  / (lx ** 2 / ly ** 2 + (L - 1) * gx ** 2 / gy ** 2 / (1.0 + c * a) ** 2))
            w2 = L / (2.0 * d) - (L - 1) * w3 * gx ** 2 / gy ** 2
        elif box_active:
            w2 = 0.0
            w3 = L / (2.0 * d) * gy ** 2 / ((L - 1) * gx ** 2)
            w1 = (1.0 / ly - gy / ly ** 2) / 2.0 - w3 * lx ** 2 / ly ** 2
        else:
            w1 = 0.0
            w2 = 0.0
            w3 = L / (2.0 * d) * gy ** 2 / ((L - 1) * gx ** 2)
        return w1, w2, w3

    b = p.beta
    c = 1.0 / ly - 1.0 / gy
    env = 1.0 / (1.0 / b + c)
    env_active = abs(d - env) <= _ACTIVE_TOL * env
    box_active = abs(b - gy) <= _ACTIVE_TOL * gy
    if env_active:
        w1 = 0.0
        w3 = ((L / (2.0 * d) / (1.0 + c * b) ** 2 + (L - 1) * c / 2.0 / (1.0 + c * b))
              / ((L - 1) * gx ** 2 / gy ** 2 + lx ** 2 / ly ** 2 / (1.0 + c * b) ** 2))
        w2 = L / (2.0 * d) - w3 * lx ** 2 / ly ** 2
    elif box_active:
        w2 = 0.0
        w3 = L / (2.0 * d) * ly ** 2 / lx ** 2
        w1 = (L - 1) * c / (2.0 * (1.0 + c * b)) - w3 * (L - 1) * gx ** 2 / gy ** 2
    else:
        w1 = 0.0
        w2 = 0.0
        w3 = L / (2.0 * d) * ly ** 2 / lx ** 2
    return w1, w2, w3


def kkt_check(
    p: ProgramPoint,
    multipliers: tuple[float, float, float],
    spectrum: Spectrum,
    L: int,
    D: float,
) -> KktCertificate:
    """Residuals of the five-condition KKT system at p with given multipliers.

    Evaluates the reduced program on the spectrum's active side: the two
    stationarity equations (with respect to the free log variable and
    delta), and the three complementarity products for the box constraint,
    the envelope constraint (on delta), and the distortion constraint.  A
    point is certified optimal when both residuals are small and the
    multipliers are nonnegative.
    """
    s = spectrum
    lx, gx, ly, gy = s.lambda_x, s.gamma_x, s.lambda_y, s.gamma_y
    w1, w2, w3 = multipliers
    d = p.delta
    dist = distortion_constraint(p, s, L)
    if ly >= gy:
        a = p.alpha
        c = 1.0 / gy - 1.0 / ly
        env = 1.0 / (1.0 / a + c)
        sa = ((gy - ly) / (2.0 * ((ly - gy) * a + ly * gy)) + w1
              - w2 / (1.0 + c * a) ** 2 + w3 * lx ** 2 / ly ** 2)
        sd = -L / (2.0 * d) + w2 + (L - 1) * w3 * gx ** 2 / gy ** 2
        comp = max(abs(w1 * (a - ly)), abs(w2 * (d - env)),
                   abs(w3 * (dist - L * D)))
    else:
        b = p.beta
        c = 1.0 / ly - 1.0 / gy
        env = 1.0 / (1.0 / b + c)
        sa = ((L - 1) * (ly - gy) / (2.0 * ((gy - ly) * b + ly * gy)) + w1
              - w2 / (1.0 + c * b) ** 2 + w3 * (L - 1) * gx ** 2 / gy ** 2)
        sd = -L / (2.0 * d) + w2 + w3 * lx ** 2 / ly ** 2
        comp = max(abs(w1 * (b - gy)), abs(w2 * (d - env)),
                   abs(w3 * (dist - L * D)))
    return KktCertificate(w1, w2, w3, max(abs(sa), abs(sd)), comp)


def solve_program(
    spectrum: Spectrum, L: int, D: float, tol: float = DEFAULT_TOL
) -> tuple[ProgramPoint, float, KktCertificate]:
    """Minimize Omega subject to the converse constraints at distortion D.

    Parameters
    ----------
    spectrum, L : model
    D : float
        Per-component distortion, inside (d_min, sigma_x_sq).
    tol : float
        Requested value accuracy in nats.  The golden-section budget
        resolves far below 1e-9; values much below 1e-12 are not
        meaningful in float64 and are treated as 1e-12.

    Returns
    -------
    (point, value_nats, certificate)
        value_nats == omega_objective(point, spectrum, L); the certificate
        carries recovered multipliers and their residuals.

    Raises
    ------
    DomainError
        D outside the open interval (d_min, sigma_x_sq).
    ConvergenceError
        The final certificate residuals exceed CERTIFICATE_TOL (carries
        the best point found in .best).
    """
    floor = d_min(spectrum, L)
    ceil = source_variance(spectrum, L)
    if not (floor < D < ceil):
        raise DomainError(
            f"D = {D!r} outside the achievable interval (d_min, sigma_x_sq) = "
            f"({floor!r}, {ceil!r})"
        )
    point = _solve_reduced(spectrum, L, D)
    value = omega_objective(point, spectrum, L)
    mult = recover_multipliers(point, spectrum, L, D)
    cert = kkt_check(point, mult, spectrum, L, D)
    residual = max(cert.stationarity_residual, cert.complementarity_residual,
                   -min(cert.omega1, cert.omega2, cert.omega3, 0.0))
    if residual > max(CERTIFICATE_TOL, tol):
        raise ConvergenceError(
            f"KKT residual {residual!r} exceeds certificate tolerance at "
            f"D = {D!r}", best=(point, value, cert))
    return point, value, cert
