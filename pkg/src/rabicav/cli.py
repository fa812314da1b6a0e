"""Command-line interface: simulate / compare / energy / revival / fit / verify.

Configuration comes from a JSON file (same keys as the params module) plus
one-to-one flag overrides; flags win.  Outputs are RFC-4180-style CSV files
with 17-significant-digit floats and optional self-contained SVG plots.
Everything is deterministic: repeated runs produce byte-identical files.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
4 infeasible fit, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, aggregate, repcheck, revival, svgplot
from .dressed import ConvergenceError
from .integrate import IntegrationError
from .lindblad import S0_MODES, DegenerateRatesError, pg_irreducible
from .params import ParameterError, PhysicalParams, params_from_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_INFEASIBLE = 4
EXIT_VERIFY = 5

_CRLF = "\r\n"


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + _CRLF)
        for i in range(rows):
            fh.write(",".join(_fmt(float(col[i])) for col in columns) + _CRLF)


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ParameterError("config must be a JSON object")
    return config


def read_data_csv(path: str) -> np.ndarray:
    """Read experiment points: header ``t,p,sigma``, one triple per row."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParameterError(f"cannot read data file {path}: {exc}") from exc
    if not lines or lines[0].strip() != "t,p,sigma":
        raise ParameterError(f"{path}: first line must be the header 't,p,sigma'")
    rows = []
    bad = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise ValueError("expected 3 fields")
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            bad.append(f"line {lineno}: {exc}")
    if bad:
        raise ParameterError(f"{path}: malformed rows: " + "; ".join(bad))
    if not rows:
        raise ParameterError(f"{path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


_OVERRIDE_FLAGS = {
    "omega": "omega",
    "q_ph": "q_ph",
    "gamma1_ph": "gamma1_ph",
    "gamma2_ph": "gamma2_ph",
    "gamma3": "gamma3",
    "n_oscillators": "N",
    "mode_ratio": "mode_ratio",
    "hbar": "hbar",
}


def _resolve_params(args) -> tuple[list[PhysicalParams], list[float]]:
    """Merge config file and flag overrides into one PhysicalParams per
    requested varsigma value."""
    config = _load_config(args.config) if args.config else {}
    for attr, key in _OVERRIDE_FLAGS.items():
        value = getattr(args, attr, None)
        if value is not None:
            config[key] = value
    varsigmas = None
    if getattr(args, "varsigma", None) is not None:
        try:
            varsigmas = [float(v) for v in args.varsigma.split(",") if v.strip()]
        except ValueError as exc:
            raise ParameterError(f"bad --varsigma value: {exc}") from exc
        if not varsigmas:
            raise ParameterError("--varsigma must list at least one value")
    elif "varsigma" in config:
        try:
            varsigmas = [float(config["varsigma"])]
        except (TypeError, ValueError) as exc:
            raise ParameterError(
                f"config varsigma must be a number: {exc}") from exc
    if varsigmas is None:
        raise ParameterError("varsigma missing (config key or --varsigma)")
    config["varsigma"] = varsigmas[0]
    base = params_from_config(config)
    return [base.replace(varsigma=v) for v in varsigmas], varsigmas


def _time_grid(args, params: PhysicalParams) -> np.ndarray:
    t_max = args.t_max if args.t_max is not None else 4.0 * params.rabi_period
    if t_max <= 0.0:
        raise ParameterError(f"t_max must be positive, got {t_max!r}")
    n_points = args.points if args.points is not None else 2048
    if n_points < 2:
        raise ParameterError(f"points must be >= 2, got {n_points!r}")
    return np.linspace(0.0, t_max, n_points)


def _vs_label(varsigma: float) -> str:
    return _fmt(varsigma).replace(",", ";")


def _reducible_curve(params, times, args):
    kwargs = dict(s0_mode=args.s0_mode, tail_tol=args.tail_tol)
    if params.mode_ratio is not None:
        return aggregate.pg_total_effective(params, times, **kwargs)
    return aggregate.pg_total(params, times, **kwargs)


def cmd_simulate(args) -> int:
    params_list, varsigmas = _resolve_params(args)
    times = _time_grid(args, params_list[0])
    effective = params_list[0].mode_ratio is not None

    header = ["t"]
    columns = [times]
    labels = []
    for params, vs in zip(params_list, varsigmas):
        name = ("p_reducible" if len(varsigmas) == 1
                else f"p_reducible[varsigma={_vs_label(vs)}]")
        header.append(name)
        columns.append(np.asarray(_reducible_curve(params, times, args)))
        labels.append(f"reducible varsigma={_vs_label(vs)}")
    # The irreducible curve in the renormalized parameterization (unit
    # commutator constant, physical rates) and the explicit N -> infinity
    # limit; they agree to rounding, which is the renormalization contract.
    base = params_list[0]
    scale = aggregate.gaussian_exp_scale(base) if effective else 1.0
    header.append("p_irreducible")
    columns.append(np.asarray(pg_irreducible(
        1.0, base.gamma1_ph, base.gamma2_ph, base.gamma3, base.q_ph,
        times, scale)))
    header.append("p_limit")
    columns.append(np.asarray(aggregate.pg_limit(base, times,
                                                 effective=effective)))
    _write_csv(args.csv, header, columns)
    print(f"wrote {args.csv} ({len(times)} rows, "
          f"{len(varsigmas)} reducible curve(s))")

    if args.svg:
        series = list(zip(labels, columns[1 : 1 + len(varsigmas)]))
        series.append(("irreducible", columns[-2]))
        svgplot.line_plot(
            args.svg, times, series,
            title="ground-state probability",
            xlabel="effective time (s)" if effective else "time (s)",
            ylabel="p_g")
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_compare(args) -> int:
    params_list, varsigmas = _resolve_params(args)
    times = _time_grid(args, params_list[0])
    data = read_data_csv(args.data) if args.data else None

    header = ["t"]
    columns = [times]
    series = []
    for params, vs in zip(params_list, varsigmas):
        trace = aggregate.difference_curve(params, times, s0_mode=args.s0_mode,
                                           tail_tol=args.tail_tol)
        name = f"abs_diff[varsigma={_vs_label(vs)}]"
        header.append(name)
        columns.append(trace.values)
        series.append((f"varsigma={_vs_label(vs)}", trace.values))
    _write_csv(args.csv, header, columns)
    print(f"wrote {args.csv} ({len(times)} rows)")

    if args.svg:
        points = ([(row[0], row[1], row[2]) for row in data]
                  if data is not None else None)
        svgplot.line_plot(args.svg, times, series,
                          title="|p_irr - p_reducible|",
                          xlabel="time (s)", ylabel="absolute difference",
                          points=points)
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_energy(args) -> int:
    params_list, varsigmas = _resolve_params(args)
    times = _time_grid(args, params_list[0])
    header = ["t"]
    columns = [times]
    series = []
    for params, vs in zip(params_list, varsigmas):
        name = ("E_reducible" if len(varsigmas) == 1
                else f"E_reducible[varsigma={_vs_label(vs)}]")
        header.append(name)
        vals = np.asarray(aggregate.energy_total(params, times,
                                                 tail_tol=args.tail_tol))
        columns.append(vals)
        series.append((f"reducible varsigma={_vs_label(vs)}", vals))
    base = params_list[0]
    header.append("E_irreducible")
    irr = np.asarray(aggregate.energy_irr(
        base.z, base.gamma1_bare, base.gamma2_bare, base.gamma3,
        base.q_bare, base.omega, times))
    columns.append(irr)
    series.append(("irreducible", irr))
    _write_csv(args.csv, header, columns)
    print(f"wrote {args.csv} ({len(times)} rows)")
    if args.svg:
        svgplot.line_plot(args.svg, times, series,
                          title="mean energy / hbar",
                          xlabel="time (s)", ylabel="energy (rad/s)")
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_revival(args) -> int:
    params_list, _ = _resolve_params(args)
    params = params_list[0]
    fc = revival.forecast(params)
    print(f"t_r          = {_fmt(fc.t_r)} s")
    print(f"T_Rabi       = {_fmt(fc.t_rabi)} s")
    print(f"t_r/T_Rabi   = {_fmt(fc.ratio)}")
    print(f"epsilon      = {_fmt(fc.epsilon)}")
    print(f"gamma_total  = {_fmt(fc.gamma_total)} 1/s")

    if args.trace:
        t_max = 1.2 * fc.t_r
        n_points = args.points if args.points is not None else max(
            2048, int(64 * t_max / fc.t_rabi))
        times = np.linspace(0.0, t_max, n_points)
        values = np.asarray(_reducible_curve(params, times, args))
        peak_t, peak_amp = revival.find_revival_peak(
            times, values, fc.t_rabi, 0.5 * fc.t_r, 1.2 * fc.t_r)
        print(f"envelope max = {_fmt(peak_amp)} at t = {_fmt(peak_t)} s "
              f"({100.0 * (peak_t - fc.t_r) / fc.t_r:+.2f}% of t_r)")
        if args.csv:
            _write_csv(args.csv, ["t", "p_reducible"], [times, values])
            print(f"wrote {args.csv}")
        if args.svg:
            svgplot.line_plot(
                args.svg, times, [("reducible", values)],
                title="collapse and revival", xlabel="time (s)", ylabel="p_g",
                vlines=[(fc.t_r, "t_r")])
            print(f"wrote {args.svg}")
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo_txt, hi_txt = text.split(":")
        lo, hi = float(lo_txt), float(hi_txt)
    except ValueError as exc:
        raise ParameterError(f"bad --range (expected LO:HI): {text!r}") from exc
    if not (0.0 < lo <= hi):
        raise ParameterError(f"range must satisfy 0 < LO <= HI, got {text!r}")
    return lo, hi


def _print_threshold(result, tag: str) -> None:
    print(f"[{tag}] varsigma* = {_fmt(result.varsigma_star)} "
          f"(monotone={'yes' if result.monotone else 'NO'}, "
          f"{result.evaluations} curve evaluations)")
    worst = float(np.max(result.residuals))
    print(f"[{tag}] max residual-minus-sigma at varsigma*: {_fmt(worst)}")
    for probe in result.probes:
        status = "feasible" if probe.feasible else "INFEASIBLE"
        print(f"[{tag}] probe varsigma={_fmt(probe.varsigma)}: {status} "
              f"(max violation {_fmt(probe.max_violation)})")


def cmd_fit(args) -> int:
    params_list, _ = _resolve_params(args)
    params = params_list[0]
    data = read_data_csv(args.data)
    search = _parse_range(args.range)
    result = revival.varsigma_threshold(
        data, params, search, s0_mode=args.s0_mode, tail_tol=args.tail_tol)
    _print_threshold(result, "plain")
    if params.mode_ratio is not None:
        corrected = revival.varsigma_threshold(
            data, params, search, effective=True, s0_mode=args.s0_mode,
            tail_tol=args.tail_tol)
        _print_threshold(corrected, "gaussian-corrected")
    return EXIT_OK


def cmd_verify(_args) -> int:
    outcomes = repcheck.run_verification_suites()
    failed = [o for o in outcomes if not o.passed]
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        print(f"{status} {o.name}: residual {o.residual:.3e} "
              f"(threshold {o.threshold:.1e}) {o.detail}")
    if failed:
        print(f"FAILED: {failed[0].name}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(outcomes)} verification suites passed")
    return EXIT_OK


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--varsigma",
                        help="varsigma value, or comma-separated list")
    parser.add_argument("--n-oscillators", dest="n_oscillators", type=int)
    parser.add_argument("--omega", type=float)
    parser.add_argument("--q-ph", dest="q_ph", type=float)
    parser.add_argument("--gamma1-ph", dest="gamma1_ph", type=float)
    parser.add_argument("--gamma2-ph", dest="gamma2_ph", type=float)
    parser.add_argument("--gamma3", type=float)
    parser.add_argument("--mode-ratio", dest="mode_ratio", type=float)
    parser.add_argument("--hbar", type=float)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--points", type=int)
    parser.add_argument("--s0-mode", dest="s0_mode", choices=S0_MODES,
                        default="formula")
    parser.add_argument("--tail-tol", dest="tail_tol", type=float,
                        default=1e-12)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabicav",
        description="vacuum Rabi oscillations in lossy cavities: "
                    "finite-N wave-packet quantization vs the irreducible limit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="probability traces (CSV, SVG)")
    _add_param_flags(p)
    p.add_argument("--csv", default="simulate.csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="|p_irr - p_red| difference curves")
    _add_param_flags(p)
    p.add_argument("--data", help="CSV t,p,sigma to overlay as error bars")
    p.add_argument("--csv", default="compare.csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("energy", help="mean-energy decay curves")
    _add_param_flags(p)
    p.add_argument("--csv", default="energy.csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("revival", help="revival forecast and long trace")
    _add_param_flags(p)
    p.add_argument("--trace", action="store_true",
                   help="also simulate through 1.2 t_r")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_revival)

    p = sub.add_parser("fit", help="minimal varsigma consistent with data")
    _add_param_flags(p)
    p.add_argument("--data", required=True, help="CSV t,p,sigma")
    p.add_argument("--range", default="1:1e6", help="varsigma search LO:HI")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run the verification battery")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except revival.InfeasibleFitError as exc:
        print(f"infeasible fit: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DegenerateRatesError, IntegrationError, ConvergenceError,
            FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
