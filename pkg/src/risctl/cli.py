"""Command-line entry point: subcommand dispatch and CSV emission.

Each subcommand reads one flat key=value configuration (built-in defaults
when no file is given), runs its experiment and writes a single schema-versioned
CSV. Exit codes: 0 success, 2 configuration/usage error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from risctl import control, engine, output, timing
from risctl.config import ExperimentConfig, default_lines, load_config, with_overrides
from risctl.errors import ConfigurationError, ContractError, EstimationError


def parse_range(text: str) -> np.ndarray:
    """`start:stop:step` -> inclusive grid (stop kept when it lands on the grid)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigurationError(f"range flag must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ConfigurationError(f"bad range flag {text!r}: {exc}") from exc
    if step <= 0:
        raise ConfigurationError("range step must be positive")
    if stop < start:
        raise ConfigurationError("range stop must be >= start")
    grid = np.arange(start, stop + step / 2.0, step)
    if grid.size == 0:
        raise ConfigurationError(f"range flag {text!r} yields an empty grid")
    return grid


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    return with_overrides(cfg, **overrides) if overrides else cfg


def _plot_path(out: str) -> str:
    stem = out[: -len(".csv")] if out.endswith(".csv") else out
    return stem + ".png"


def cmd_snr_cdf(args) -> int:
    cfg = _load(args)
    summary = engine.run_experiment(cfg)
    rows = []
    series = {}
    for name, samples in (("actual", summary.snr_cdf_actual), ("estimated", summary.snr_cdf_estimated)):
        db = 10.0 * np.log10(samples[samples > 0])
        series[name] = db
        rows.extend(("%s" % name, float(v)) for v in db)
    output.write_csv(args.out, ["series", "sample_snr_db"], rows)
    if args.plot:
        output.render_cdf(_plot_path(args.out), series, "SNR [dB]")
    return 0


def cmd_goodput_sweep(args) -> int:
    cfg = _load(args)
    grid = parse_range(args.tau_ms)
    samples = engine.paradigm_samples(cfg)
    rows = []
    means = []
    p_ae = float(samples.algorithmic_error.mean())
    for tau_ms in grid:
        goodput = engine.goodput_for_tau(cfg, samples, float(tau_ms))
        means.append(float(goodput.mean()))
        rows.append((float(tau_ms), cfg.paradigm, cfg.cc_kind, means[-1], p_ae))
    output.write_csv(
        args.out, ["tau_ms", "paradigm", "cc_kind", "mean_goodput_bps", "empirical_p_ae"], rows
    )
    if args.plot:
        output.render_lines(
            _plot_path(args.out),
            {cfg.paradigm: (grid, means)},
            "frame length tau [ms]",
            "mean goodput [bit/s]",
        )
    return 0


def cmd_calibrate(args) -> int:
    cfg = _load(args)
    grid = [float(g) for g in parse_range(args.gamma0_db)]
    best, table = engine.calibrate_gamma0(cfg, grid)
    output.write_csv(args.out, ["gamma0_db", "mean_goodput_bps"], table)
    print(f"best_gamma0_db = {best:.9g}")
    if args.plot:
        xs = [row[0] for row in table]
        ys = [row[1] for row in table]
        output.render_lines(
            _plot_path(args.out),
            {cfg.paradigm: (xs, ys)},
            "target SNR gamma0 [dB]",
            "mean goodput [bit/s]",
        )
    return 0


def cmd_utility(args) -> int:
    cfg = _load(args)
    grid = parse_range(args.one_minus_pcc)
    if np.any(grid > 1.0):
        raise ConfigurationError("one_minus_pcc values must lie in [0, 1]")
    samples = engine.paradigm_samples(cfg)
    forced = dataclasses.replace(samples, control_success=np.ones_like(samples.control_success))
    base = float(engine.goodput_for_tau(cfg, forced, cfg.tau_ms).mean())
    rows = [(float(q), (1.0 - float(q)) * base) for q in grid]
    output.write_csv(args.out, ["one_minus_pcc", "mean_utility_bps"], rows)
    if args.plot:
        output.render_lines(
            _plot_path(args.out),
            {cfg.paradigm: ([r[0] for r in rows], [r[1] for r in rows])},
            "erroneous control probability 1 - p_cc",
            "mean utility [bit/s]",
        )
    return 0


def cmd_reliability(args) -> int:
    cfg = _load(args)
    ctx = engine.build_context(cfg)
    target = args.target_pcc
    ue = [b for b in ctx.budgets if b.destination == "ue"]
    ris = [b for b in ctx.budgets if b.destination == "risc"]
    if cfg.cc_kind == timing.OBCC:
        lam = control.min_lambda_obcc(target, ue)
        lam_db = -math.inf if lam <= 0 else 10.0 * math.log10(lam)
        rows = [(lam_db, math.inf, True)]
    else:
        grid_db = parse_range(args.lambda_u_db)
        grid = [10.0 ** (g / 10.0) for g in grid_db]
        frontier = control.reliability_frontier(target, ue, ris, grid)
        rows = []
        for g_db, (_, lam_r) in zip(grid_db, frontier):
            if lam_r is None:
                rows.append((float(g_db), None, False))
            else:
                rows.append((float(g_db), 10.0 * math.log10(lam_r), True))
    output.write_csv(args.out, ["lambda_u_db", "lambda_r_db_min", "feasible"], rows)
    if args.plot and cfg.cc_kind == timing.IBCC:
        pts = [(r[0], r[1]) for r in rows if r[2]]
        if pts:
            output.render_lines(
                _plot_path(args.out),
                {cfg.paradigm: ([p[0] for p in pts], [p[1] for p in pts])},
                "mean UE CC SNR lambda_u [dB]",
                "minimal lambda_r [dB]",
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risctl",
        description="RIS-aided uplink simulator: paradigm goodput, calibration and control reliability.",
    )
    parser.add_argument("--print-defaults", action="store_true", help="list every configuration key at its default and exit")
    sub = parser.add_subparsers(dest="command")

    def common(p, default_out):
        p.add_argument("--config", default=None, help="key=value configuration file")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--trials", type=int, default=None, help="trial count override")
        p.add_argument("--out", default=default_out, help="output CSV path")
        p.add_argument("--plot", action="store_true", help="also render a PNG figure next to the CSV")

    p = sub.add_parser("snr-cdf", help="actual vs estimated SNR CDF samples")
    common(p, "snr_cdf.csv")
    p.set_defaults(func=cmd_snr_cdf)

    p = sub.add_parser("goodput-sweep", help="mean goodput over a frame-length grid")
    common(p, "goodput_sweep.csv")
    p.add_argument("--tau-ms", default="10:200:10", help="frame-length grid start:stop:step in ms")
    p.set_defaults(func=cmd_goodput_sweep)

    p = sub.add_parser("calibrate", help="mean goodput over a target-SNR grid (sweep paradigms)")
    common(p, "calibrate.csv")
    p.add_argument("--gamma0-db", default="-13:30:0.5", help="target-SNR grid start:stop:step in dB")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("utility", help="closed-form utility vs erroneous control probability")
    common(p, "utility.csv")
    p.add_argument("--one-minus-pcc", default="0:1:0.05", help="erroneous-control grid start:stop:step")
    p.set_defaults(func=cmd_utility)

    p = sub.add_parser("reliability", help="minimum control-channel SNRs meeting a correctness target")
    common(p, "reliability.csv")
    p.add_argument("--target-pcc", type=float, default=0.99, help="correct-control probability target")
    p.add_argument("--lambda-u-db", default="8:30:0.5", help="UE CC mean-SNR grid start:stop:step in dB (in-band only)")
    p.set_defaults(func=cmd_reliability)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_defaults:
        for line in default_lines():
            print(line)
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ContractError, EstimationError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
