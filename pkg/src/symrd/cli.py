"""Command-line surface: spec inspection, bound sweeps, asymptotics, simulation.

Subcommands
-----------
info       validate a spec file and report spectrum, d_min, sigma_x_sq,
           regime branch and applicable thresholds
classify   regime branch with its roots and thresholds
sweep      CSV table of upper/lower bounds over a distortion grid, with
           optional convex-oracle certification and asymptotic columns
asymptotic CSV table of the large-L expressions over a distortion grid
gap-inf    CSV table of the limiting gap over a distortion grid
simulate   solve the test-channel noise level for a target distortion,
           run the Monte-Carlo check, and emit its CSV row

All numeric CSV fields are printed with 12 significant digits and a '.'
decimal separator regardless of locale; identical invocations produce
byte-identical standard output.  Rates are in nats unless --bits is given,
which divides rate columns by ln 2 at display time only.  Exit codes:
0 success, 2 usage/validation errors, 3 numerical-convergence failures.
Diagnostics go to standard error and never use color (NO_COLOR is always
honored because no color is ever emitted).
"""

from __future__ import annotations

import argparse
import math
import sys

from . import asymptotics, lower_bound, oracle, simulate, upper_bound
from .errors import ConvergenceError, DomainError, PrecisionError, ValidationError
from .model import d_min, parse_spec_text, source_variance, spectral_decompose

CSV_FMT = "%.12g"
INFO_FMT = "%.6g"
_LN2 = math.log(2.0)


def _num(x: float) -> str:
    return CSV_FMT % x


def _load_spec(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read spec file {path!r}: {exc}")
    return parse_spec_text(text, name=path)


def _grid(d_start: float, d_end: float, n_points: int,
          include_endpoints_eps: bool) -> list[float]:
    """Distortion grid: open at both ends by default.

    With include_endpoints_eps the grid is the closed n-point linspace,
    endpoints shifted inward by a relative 1e-9 for near-boundary
    inspection.
    """
    if n_points < 2:
        raise ValidationError(f"n_points must be at least 2, got {n_points}")
    if not d_start < d_end:
        raise ValidationError(f"need d_start < d_end, got {d_start!r} >= {d_end!r}")
    if include_endpoints_eps:
        step = (d_end - d_start) / (n_points - 1)
        pts = [d_start + k * step for k in range(n_points)]
        pts[0] = d_start * (1.0 + 1e-9)
        pts[-1] = d_end * (1.0 - 1e-9)
        return pts
    step = (d_end - d_start) / (n_points + 1)
    return [d_start + (k + 1) * step for k in range(n_points)]


def _check_range(spectrum, L: int, d_start: float, d_end: float) -> None:
    floor = d_min(spectrum, L)
    ceil = source_variance(spectrum, L)
    if not (floor < d_start and d_end < ceil):
        raise ValidationError(
            f"sweep range [{d_start!r}, {d_end!r}] not inside the valid "
            f"interval (d_min, sigma_x_sq) = ({floor!r}, {ceil!r})"
        )


def _print_report(pairs) -> None:
    for key, value in pairs:
        if isinstance(value, float):
            print(f"{key} = {INFO_FMT % value}")
        else:
            print(f"{key} = {value}")


def _threshold_pairs(params) -> list:
    pairs = []
    for field in ("mu1", "mu2", "nu1", "nu2", "d_th_1", "d_th_2", "d_th_c",
                  "d_th_1_hat", "d_th_2_hat", "d_th_c_hat"):
        value = getattr(params, field)
        if value is not None:
            pairs.append((field, value))
    return pairs


def cmd_info(args) -> int:
    spec = _load_spec(args.spec_file)
    s = spectral_decompose(spec)
    params = lower_bound.thresholds(s, spec.L)
    pairs = [("L", spec.L),
             ("lambda_x", s.lambda_x), ("gamma_x", s.gamma_x),
             ("lambda_z", s.lambda_z), ("gamma_z", s.gamma_z),
             ("lambda_y", s.lambda_y), ("gamma_y", s.gamma_y),
             ("lambda_w", s.lambda_w),
             ("sigma_x_sq", source_variance(s, spec.L)),
             ("d_min", d_min(s, spec.L)),
             ("branch", params.branch.value)]
    pairs += _threshold_pairs(params)
    _print_report(pairs)
    return 0


def cmd_classify(args) -> int:
    spec = _load_spec(args.spec_file)
    s = spectral_decompose(spec)
    params = lower_bound.thresholds(s, spec.L)
    _print_report([("branch", params.branch.value)] + _threshold_pairs(params))
    return 0


def cmd_sweep(args) -> int:
    spec = _load_spec(args.spec_file)
    s = spectral_decompose(spec)
    L = spec.L
    _check_range(s, L, args.d_start, args.d_end)
    grid = _grid(args.d_start, args.d_end, args.n_points,
                 args.include_endpoints_eps)
    asym_ls = []
    if args.asymptotic:
        asym_ls = [int(part) for part in args.asymptotic.split(",") if part]
        if not asym_ls:
            raise ValidationError("--asymptotic needs a comma-separated L list")
    gap_column = False
    if asym_ls:
        regime = asymptotics.asymptotic_regime(spec)
        gap_column = regime.condition is asymptotics.Condition.PosMixPosRho_XiLtHalf

    scale = _LN2 if args.bits else 1.0
    header = ["D", "upper_nats", "lower_nats", "gap_nats", "piece"]
    if args.certify:
        header += ["oracle_nats", "kkt_residual"]
    for asym_l in asym_ls:
        header += [f"upper_asym_L{asym_l}", f"lower_asym_L{asym_l}"]
    if gap_column:
        header.append("delta_r_inf")
    if args.bits:
        header = [h.replace("_nats", "_bits") for h in header]
    print(",".join(header))

    for D in grid:
        upper = upper_bound.upper_bound_rate(s, L, D)
        lower = lower_bound.lower_bound_rate(s, L, D)
        piece = lower_bound.lower_bound_piece(s, L, D)
        row = [_num(D), _num(upper / scale), _num(lower / scale),
               _num((upper - lower) / scale), piece]
        if args.certify:
            _, value, cert = oracle.solve_program(s, L, D)
            residual = max(cert.stationarity_residual,
                           cert.complementarity_residual)
            row += [_num(value / scale), _num(residual)]
        for asym_l in asym_ls:
            row.append(_num(asymptotics.upper_asymptotic(spec, asym_l, D) / scale))
            row.append(_num(asymptotics.lower_asymptotic(spec, asym_l, D) / scale))
        if gap_column:
            row.append(_num(asymptotics.asymptotic_gap(spec, D) / scale))
        print(",".join(row))
    return 0


def cmd_asymptotic(args) -> int:
    spec = _load_spec(args.spec_file)
    ls = [int(part) for part in args.L.split(",") if part]
    if not ls:
        raise ValidationError("--L needs a comma-separated list of system sizes")
    grid = _grid(args.d_start, args.d_end, args.n_points,
                 args.include_endpoints_eps)
    scale = _LN2 if args.bits else 1.0
    unit = "bits" if args.bits else "nats"
    header = ["D"]
    for asym_l in ls:
        header += [f"upper_asym_{unit}_L{asym_l}", f"lower_asym_{unit}_L{asym_l}"]
    print(",".join(header))
    for D in grid:
        row = [_num(D)]
        for asym_l in ls:
            row.append(_num(asymptotics.upper_asymptotic(spec, asym_l, D) / scale))
            row.append(_num(asymptotics.lower_asymptotic(spec, asym_l, D) / scale))
        print(",".join(row))
    return 0


def cmd_gap_inf(args) -> int:
    spec = _load_spec(args.spec_file)
    grid = _grid(args.d_start, args.d_end, args.n_points,
                 args.include_endpoints_eps)
    scale = _LN2 if args.bits else 1.0
    print("D,delta_r_inf_bits" if args.bits else "D,delta_r_inf")
    for D in grid:
        print(",".join([_num(D), _num(asymptotics.asymptotic_gap(spec, D) / scale)]))
    return 0


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec_file)
    s = spectral_decompose(spec)
    solution = upper_bound.solve_lambda_q(s, spec.L, args.D)
    config = simulate.SimConfig(spec, solution.lambda_q, args.n, args.seed)
    result = simulate.run_simulation(config)
    scale = _LN2 if args.bits else 1.0
    header = ("n,lambda_q,distortion_empirical,distortion_closed_form,"
              "rate_closed_form,rate_empirical,std_err")
    if args.bits:
        header = header.replace("rate_closed_form", "rate_closed_form_bits")
        header = header.replace("rate_empirical", "rate_empirical_bits")
    print(header)
    print(",".join([
        str(result.n_samples), _num(result.lambda_q),
        _num(result.distortion_empirical), _num(result.distortion_closed_form),
        _num(result.rate_closed_form / scale),
        _num(result.rate_empirical / scale), _num(result.std_err),
    ]))
    print(
        "estimator comparison: routed empirical = "
        f"{_num(result.distortion_empirical)} vs closed form "
        f"{_num(result.distortion_closed_form)} "
        f"(matches: {result.matches_routed_identity}); direct X+Q empirical = "
        f"{_num(result.distortion_direct_empirical)} vs closed form "
        f"{_num(result.distortion_direct_closed_form)}",
        file=sys.stderr,
    )
    return 0


def _add_grid_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d-start", type=float, required=True,
                        help="left edge of the distortion grid")
    parser.add_argument("--d-end", type=float, required=True,
                        help="right edge of the distortion grid")
    parser.add_argument("--n-points", type=int, required=True,
                        help="number of grid points (open grid by default)")
    parser.add_argument("--include-endpoints-eps", action="store_true",
                        help="use a closed grid with endpoints shifted "
                             "inward by a relative 1e-9")
    parser.add_argument("--bits", action="store_true",
                        help="display rates in bits instead of nats")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symrd",
        description="Rate-distortion bounds for distributed coding of "
                    "symmetrically correlated Gaussian sources.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="validate a spec and report its structure")
    p.add_argument("spec_file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("classify", help="regime branch, roots and thresholds")
    p.add_argument("spec_file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="upper/lower bound CSV over a distortion grid")
    p.add_argument("spec_file")
    _add_grid_arguments(p)
    p.add_argument("--certify", action="store_true",
                   help="add convex-oracle value and max KKT residual columns")
    p.add_argument("--asymptotic", metavar="L1,L2,...",
                   help="add large-L approximation columns at these sizes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("asymptotic", help="large-L expression CSV over a grid")
    p.add_argument("spec_file")
    p.add_argument("--L", required=True, metavar="L1,L2,...",
                   help="comma-separated system sizes to evaluate")
    _add_grid_arguments(p)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("gap-inf", help="limiting gap CSV over a grid")
    p.add_argument("spec_file")
    _add_grid_arguments(p)
    p.set_defaults(func=cmd_gap_inf)

    p = sub.add_parser("simulate", help="Monte-Carlo test-channel verification")
    p.add_argument("spec_file")
    p.add_argument("--D", type=float, required=True,
                   help="target per-component distortion")
    p.add_argument("--n", type=int, required=True, help="sample count")
    p.add_argument("--seed", type=int, required=True, help="RNG seed")
    p.add_argument("--bits", action="store_true",
                   help="display rates in bits instead of nats")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
