"""Command-line front end.

Subcommands: model, estimate, fit, simulate, sweep, calibrate. All
tabular output is CSV to stdout or ``--out``; human-readable notes go to
stderr. Exit codes: 0 success, 1 validation error, 2 data inconsistency,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import fitting, montecarlo, physics
from .config import RunConfig, SweepSpec, load_run_config, sweep_grid
from .counts import CountRecord, DetectorPair, car, forward_counts, invert_counts
from .errors import ConfigError, DataInconsistencyError
from .physics import RateTriple

COUNTS_HEADER = ["pulse_count", "n_s", "n_i", "n_co", "n_ac"]
SERIES_HEADER = ["x", "y"]

_RATE_FIELDS = ["pair_rate", "stokes_rate", "antistokes_rate"]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(header: list[str], rows: list[list], out: str | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    if out is None:
        sys.stdout.write(buffer.getvalue())
    else:
        Path(out).write_text(buffer.getvalue(), encoding="utf-8")


def _detector(cfg: RunConfig) -> DetectorPair:
    return DetectorPair(signal=cfg.signal, idler=cfg.idler)


def _try(compute):
    """Evaluate a report quantity, mapping 'undefined' to an empty cell."""
    try:
        return compute()
    except (ValueError, ZeroDivisionError):
        return None


def _car_prediction(rates: RateTriple, det: DetectorPair):
    return _try(lambda: car(forward_counts(rates, det)))


def _ratio_efficiency(ratio: float | None):
    if ratio is None:
        return None
    return ratio / (1.0 + ratio)


def _model_row(cfg: RunConfig, per_second: bool) -> tuple[list[str], list]:
    """One-row report of everything the forward model predicts.

    Rates include the full phase-matching factor; the pair-to-noise
    ratio and the preparation efficiency neglect phase mismatch (the
    square-root-law convention).
    """
    det = _detector(cfg)
    rates = physics.generation_rates(cfg.fiber, cfg.pump, cfg.signal, cfg.idler, cfg.env)
    ratio = _try(lambda: physics.pair_noise_ratio(cfg.fiber, cfg.pump, cfg.signal, cfg.idler, cfg.env))
    header = _RATE_FIELDS + [
        "pair_noise_ratio",
        "car_prediction",
        "hsps_efficiency",
        "multiphoton_prob",
        "pump_photons",
    ]
    row = [
        rates.pair_rate,
        rates.stokes_rate,
        rates.antistokes_rate,
        ratio,
        _car_prediction(rates, det),
        _ratio_efficiency(ratio),
        physics.multiphoton_probability(rates.pair_rate),
        physics.pump_photons_per_pulse(cfg.pump),
    ]
    if per_second:
        header += [f + "_hz" for f in _RATE_FIELDS]
        f_rep = cfg.pump.repetition_rate
        row += [rates.pair_rate * f_rep, rates.stokes_rate * f_rep, rates.antistokes_rate * f_rep]
    return header, row


def cmd_model(args) -> int:
    cfg = load_run_config(args.config)
    header, row = _model_row(cfg, args.per_second)
    _write_csv(header, [row], args.out)
    return 0


def _read_counts_csv(path: str) -> tuple[bool, list[tuple[int, str, CountRecord]]]:
    """Read a counts CSV; returns (has_label, [(line_no, label, record), ...])."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty file, expected header {','.join(COUNTS_HEADER)}") from None
        header = [h.strip() for h in header]
        if header == COUNTS_HEADER:
            has_label = False
        elif header == ["label"] + COUNTS_HEADER:
            has_label = True
        else:
            raise ConfigError(
                f"{path}: bad counts header {','.join(header)!r}, "
                f"expected {','.join(COUNTS_HEADER)} with optional leading label"
            )
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            expected = len(COUNTS_HEADER) + (1 if has_label else 0)
            if len(row) != expected:
                raise ConfigError(f"{path}: row {line_no}: expected {expected} columns, got {len(row)}")
            label = row[0] if has_label else ""
            values = row[1:] if has_label else row
            try:
                record = CountRecord(
                    n_s=float(values[1]), n_i=float(values[2]),
                    n_co=float(values[3]), n_ac=float(values[4]),
                )
            except ValueError as exc:
                raise ConfigError(f"{path}: row {line_no}: {exc}") from None
            rows.append((line_no, label, record))
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return has_label, rows


def cmd_estimate(args) -> int:
    cfg = load_run_config(args.config)
    det = _detector(cfg)
    has_label, records = _read_counts_csv(args.counts_csv)

    header = ["row"] + (["label"] if has_label else []) + _RATE_FIELDS + ["car"]
    if args.per_second:
        header += [f + "_hz" for f in _RATE_FIELDS]
    out_rows = []
    failures = 0
    for line_no, label, record in records:
        try:
            rates = invert_counts(record, det, lenient=args.lenient)
        except DataInconsistencyError as exc:
            print(f"row {line_no}: {exc}", file=sys.stderr)
            failures += 1
            continue
        row = [line_no] + ([label] if has_label else [])
        row += [rates.pair_rate, rates.stokes_rate, rates.antistokes_rate]
        row.append(_try(lambda: car(record)))
        if args.per_second:
            f_rep = cfg.pump.repetition_rate
            row += [r * f_rep for r in (rates.pair_rate, rates.stokes_rate, rates.antistokes_rate)]
        out_rows.append(row)
    _write_csv(header, out_rows, args.out)
    return 2 if failures else 0


def _read_series_csv(path: str) -> list[fitting.SeriesPoint]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ConfigError(f"{path}: empty file, expected header x,y[,weight]") from None
        if header not in (SERIES_HEADER, SERIES_HEADER + ["weight"]):
            raise ConfigError(f"{path}: bad series header {','.join(header)!r}, expected x,y[,weight]")
        points = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                weight = float(row[2]) if len(header) == 3 else 1.0
                points.append(fitting.SeriesPoint(x=float(row[0]), y=float(row[1]), weight=weight))
            except (ValueError, IndexError) as exc:
                raise ConfigError(f"{path}: row {line_no}: {exc}") from None
    if not points:
        raise ConfigError(f"{path}: no data rows")
    return points


def cmd_fit(args) -> int:
    points = _read_series_csv(args.series_csv)
    if args.model == "quadratic":
        fit = fitting.fit_quadratic(points)
        _write_csv(
            ["model", "s1", "s2", "residual_norm"],
            [["quadratic", fit.s1, fit.s2, fit.residual_norm]],
            args.out,
        )
    else:
        fit = fitting.fit_sqrt(points)
        _write_csv(
            ["model", "coeff", "residual_norm"],
            [["sqrt", fit.coeff, fit.residual_norm]],
            args.out,
        )
    return 0


def cmd_simulate(args) -> int:
    cfg = load_run_config(args.config)
    if cfg.sim is None:
        raise ConfigError("simulate requires a [sim] section in the config")
    sim_cfg = cfg.sim if args.seed is None else replace(cfg.sim, seed=args.seed)
    det = _detector(cfg)
    rates = physics.generation_rates(cfg.fiber, cfg.pump, cfg.signal, cfg.idler, cfg.env)
    result = montecarlo.simulate_pulses(rates, det, sim_cfg)

    counts = result.counts
    _write_csv(
        COUNTS_HEADER,
        [[result.n_pulses, counts.n_s, counts.n_i, counts.n_co, counts.n_ac]],
        args.out,
    )
    for field in ("n_s", "n_i", "n_co", "n_ac"):
        print(
            f"{field}: {result.raw[field]} / {result.n_pulses} pulses "
            f"(p={getattr(counts, field):.6g}, std_err={result.std_err[field]:.3g})",
            file=sys.stderr,
        )
    return 0


def _sweep_rows(cfg: RunConfig, spec: SweepSpec, per_second: bool) -> tuple[list[str], list[list]]:
    det = _detector(cfg)
    block = _RATE_FIELDS + [
        "pair_noise_ratio",
        "hsps_efficiency",
        "car_prediction",
        "multiphoton_prob",
    ]
    rows = []
    if spec.variable == "pair_rate":
        header = ["pair_rate", "stokes_rate", "antistokes_rate"] + block[3:]
        if per_second:
            header += [f + "_hz" for f in _RATE_FIELDS]
        coeff = fitting.sqrt_law_coefficient(cfg.fiber, cfg.idler, cfg.env)
        occupation = physics.bose_occupation(cfg.idler.detune, cfg.env)
        for value in sweep_grid(spec):
            pair = float(value)
            # ratio = coeff*sqrt(R), so the noise rate R/ratio = sqrt(R)/coeff
            antistokes = math.sqrt(pair) / coeff
            stokes = antistokes * (occupation + 1.0) / occupation
            ratio = coeff * math.sqrt(pair) if pair > 0 else None
            rates = RateTriple(pair, stokes, antistokes)
            row = [
                pair, stokes, antistokes, ratio, _ratio_efficiency(ratio),
                _car_prediction(rates, det), physics.multiphoton_probability(pair),
            ]
            if per_second:
                f_rep = cfg.pump.repetition_rate
                row += [pair * f_rep, stokes * f_rep, antistokes * f_rep]
            rows.append(row)
        return header, rows

    header = [spec.variable, "xi_c", "xi_s", "xi_i"] + block
    if per_second:
        header += [f + "_hz" for f in _RATE_FIELDS]
    for value in sweep_grid(spec):
        value = float(value)
        fiber, pump, signal, idler, env = cfg.fiber, cfg.pump, cfg.signal, cfg.idler, cfg.env
        if spec.variable == "peak_power":
            pump = replace(pump, peak_power=value)
        elif spec.variable == "temperature":
            env = physics.Environment(temperature=value)
        else:  # detune moves both filters symmetrically
            signal = replace(signal, detune=value)
            idler = replace(idler, detune=value)
        xi_c = physics.sfwm_spectral_density(fiber, pump, signal.detune)
        xi_s, _ = physics.raman_spectral_densities(fiber, pump, signal.detune, env)
        _, xi_i = physics.raman_spectral_densities(fiber, pump, idler.detune, env)
        rates = physics.generation_rates(fiber, pump, signal, idler, env)
        ratio = _try(lambda: physics.pair_noise_ratio(fiber, pump, signal, idler, env))
        pair_det = DetectorPair(signal=signal, idler=idler)
        row = [
            value, xi_c, xi_s, xi_i,
            rates.pair_rate, rates.stokes_rate, rates.antistokes_rate,
            ratio, _ratio_efficiency(ratio),
            _car_prediction(rates, pair_det),
            physics.multiphoton_probability(rates.pair_rate),
        ]
        if per_second:
            f_rep = pump.repetition_rate
            row += [rates.pair_rate * f_rep, rates.stokes_rate * f_rep, rates.antistokes_rate * f_rep]
        rows.append(row)
    return header, rows


def cmd_sweep(args) -> int:
    cfg = load_run_config(args.config)
    spec = SweepSpec(
        variable=args.variable, start=args.start, stop=args.stop,
        steps=args.steps, scale=args.scale,
    )
    header, rows = _sweep_rows(cfg, spec, args.per_second)
    _write_csv(header, rows, args.out)
    return 0


def cmd_calibrate(args) -> int:
    cfg = load_run_config(args.config)
    if (args.coefficient is None) == (args.efficiency is None):
        raise ConfigError("give exactly one of --coefficient or --efficiency")
    if args.efficiency is not None and args.pair_rate is None:
        raise ConfigError("--efficiency requires --pair-rate")
    gain = fitting.calibrate_raman_gain(
        cfg.fiber, cfg.idler, cfg.env,
        coefficient=args.coefficient,
        efficiency=args.efficiency,
        pair_rate=args.pair_rate,
    )
    calibrated = replace(cfg.fiber, raman_gain=gain)
    coeff = fitting.sqrt_law_coefficient(calibrated, cfg.idler, cfg.env)
    _write_csv(["raman_gain", "sqrt_law_coefficient"], [[gain, coeff]], args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fiberpairs",
        description="Model, simulate and analyze photon-pair generation and Raman noise in fibers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="run-config file (INI)")
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p = sub.add_parser("model", help="forward-model report for one configuration")
    add_common(p)
    p.add_argument("--per-second", action="store_true", help="append Hz rate columns")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("estimate", help="invert a counts CSV to generation rates")
    p.add_argument("counts_csv", help="counts CSV (pulse_count,n_s,n_i,n_co,n_ac)")
    add_common(p)
    p.add_argument("--lenient", action="store_true", help="clamp negative inverted rates to zero")
    p.add_argument("--per-second", action="store_true", help="append Hz rate columns")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("fit", help="fit a series CSV (x,y[,weight])")
    p.add_argument("series_csv", help="series CSV with header x,y[,weight]")
    p.add_argument("--model", choices=("quadratic", "sqrt"), required=True)
    add_common(p, config=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="Monte Carlo pulse simulation to a counts CSV")
    add_common(p)
    p.add_argument("--seed", type=int, default=None, help="override [sim] seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="sweep one variable and emit all model outputs")
    add_common(p)
    p.add_argument("--variable", choices=("peak_power", "temperature", "detune", "pair_rate"), required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--per-second", action="store_true", help="append Hz rate columns")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="back-solve the Raman gain from an observed figure")
    add_common(p)
    p.add_argument("--coefficient", type=float, default=None, help="observed square-root-law coefficient")
    p.add_argument("--efficiency", type=float, default=None, help="observed preparation efficiency")
    p.add_argument("--pair-rate", type=float, default=None, help="pair rate at which the efficiency was observed")
    p.set_defaults(func=cmd_calibrate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
