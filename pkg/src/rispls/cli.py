"""Command-line front end.

    rispls run <preset|file> [--seed U64] [--trials N] [--set key=value ...] [--svg] [--out DIR]
    rispls list-presets
    rispls validate <file>
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from .config import PRESETS, ConfigError, Experiment, apply_overrides, load, parse_config, parse_override
from .montecarlo import SweepResult, argbest, sweep_many
from .output import ResultRow, Series, emit_csv, emit_svg, fmt

log = logging.getLogger("rispls")

AXIS_LABELS = {
    "theta_deg": "RIS elevation angle theta (deg)",
    "n_elements": "number of RIS elements N",
    "alpha": "path-loss exponent alpha",
    "d_te_m": "Tx-eavesdropper distance (m)",
    "quantization_bits": "phase quantization (bits; last point unquantized)",
}
METRIC_LABELS = {
    "rate": "mean secrecy rate (bit/s/Hz)",
    "outage": "secrecy outage probability",
}


def run_experiment(exp: Experiment, workers: int | None = None) -> list[SweepResult]:
    """One sweep per series, all driven by the experiment's seed."""
    axis, values = exp.internal_axis()
    log.info(
        "%s: %d series x %d points x %d trials", exp.name, len(exp.series), len(values), exp.params["trials"]
    )
    bases = [exp.base_config(i) for i in range(len(exp.series))]
    return sweep_many(bases, axis, values, workers=workers)


def result_rows(exp: Experiment, sweeps: list[SweepResult], mean_snr: bool = False) -> list[ResultRow]:
    rows = []
    for i, s in enumerate(sweeps):
        for value, res in zip(exp.sweep_values, s.results):
            p = exp.point(i, value)
            rows.append(
                ResultRow(
                    series=exp.series_label(i),
                    theta_deg=p["theta_deg"],
                    n_elements=p["n_elements"],
                    alpha=p["alpha"],
                    d_te_m=p["d_te_m"],
                    quantization_bits=p["quantization_bits"],
                    include_ris=p["include_ris"],
                    include_direct=p["include_direct"],
                    r_th_bps_hz=p["r_th_bps_hz"],
                    rate_mean=res.rate.mean,
                    rate_ci_low=res.rate.ci_low,
                    rate_ci_high=res.rate.ci_high,
                    outage_mean=res.outage.mean,
                    outage_ci_low=res.outage.ci_low,
                    outage_ci_high=res.outage.ci_high,
                    trials=p["trials"],
                    seed=p["seed"],
                    rate_at_mean_snr=res.rate_at_mean_snr if mean_snr else None,
                )
            )
    return rows


def render_summary(exp: Experiment, sweeps: list[SweepResult], mean_snr: bool = False) -> str:
    lines = [
        f"experiment: {exp.name}",
        f"rispls {__version__}  seed={exp.params['seed']}  trials={exp.params['trials']}",
        f"sweep: {exp.sweep_axis} = {', '.join(fmt(v) for v in exp.sweep_values)}",
        f"outage threshold: {fmt(exp.params['r_th_bps_hz'])} bit/s/Hz (unless set per series)",
        "",
    ]
    for i, s in enumerate(sweeps):
        lines.append(f"series {exp.series_label(i)}")
        header = f"  {exp.sweep_axis:>17}  {'rate':>9}  {'rate 95% CI':>21}  {'outage':>9}  {'outage 95% CI':>21}"
        if mean_snr:
            header += f"  {'rate@meanSNR':>12}"
        lines.append(header)
        for value, res in zip(exp.sweep_values, s.results):
            line = (
                f"  {fmt(value):>17}  {res.rate.mean:9.4f}  [{res.rate.ci_low:9.4f}, {res.rate.ci_high:9.4f}]"
                f"  {res.outage.mean:9.5f}  [{res.outage.ci_low:9.5f}, {res.outage.ci_high:9.5f}]"
            )
            if mean_snr:
                line += f"  {res.rate_at_mean_snr:12.4f}"
            lines.append(line)
        if exp.sweep_axis == "theta_deg":
            best_rate = math.degrees(argbest(s, "max-rate"))
            best_out = math.degrees(argbest(s, "min-outage"))
            lines.append(f"  best theta_deg (max-rate):   {best_rate:g}")
            lines.append(f"  best theta_deg (min-outage): {best_out:g}")
        lines.append("")
    return "\n".join(lines)


def plot_series(exp: Experiment, sweeps: list[SweepResult]) -> list[Series]:
    xs = list(exp.sweep_values)
    if exp.sweep_axis == "quantization_bits":
        finite = [v for v in xs if v is not None]
        top = (max(finite) if finite else 0) + 1
        xs = [top if v is None else v for v in xs]
    out = []
    for i, s in enumerate(sweeps):
        ests = s.rates if exp.metric == "rate" else s.outages
        out.append(Series(exp.series_label(i), xs, [e.mean for e in ests]))
    return out


def _write_atomic(path: Path, writer, created: list[Path]) -> None:
    tmp = path.with_name(path.name + ".tmp")
    created.append(tmp)
    writer(tmp)
    os.replace(tmp, path)
    created.append(path)


def cmd_run(args) -> int:
    exp = load(args.target)
    overrides = [parse_override(item) for item in args.set or []]
    if args.seed is not None:
        overrides.append(("seed", args.seed))
    if args.trials is not None:
        overrides.append(("trials", args.trials))
    if overrides:
        exp = apply_overrides(exp, overrides)

    sweeps = run_experiment(exp, workers=args.workers)
    rows = result_rows(exp, sweeps, mean_snr=args.report_mean_snr)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []
    try:
        _write_atomic(out / "results.csv", lambda p: emit_csv(rows, p, comment=f"experiment={exp.name}"), created)
        summary = render_summary(exp, sweeps, mean_snr=args.report_mean_snr)
        _write_atomic(out / "summary.txt", lambda p: p.write_text(summary, newline=""), created)
        if args.svg:
            _write_atomic(
                out / "plot.svg",
                lambda p: emit_svg(
                    plot_series(exp, sweeps),
                    p,
                    AXIS_LABELS[exp.sweep_axis],
                    METRIC_LABELS[exp.metric],
                    title=exp.name,
                ),
                created,
            )
    except BaseException:
        for p in created:
            p.unlink(missing_ok=True)
        raise
    print(summary, end="")
    return 0


def cmd_list_presets(args) -> int:
    for name, preset in PRESETS.items():
        print(f"{name}  {preset['description']}")
    return 0


def cmd_validate(args) -> int:
    exp = parse_config(args.file)
    print(json.dumps(exp.to_document(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rispls", description="RIS-aided physical-layer security simulator")
    parser.add_argument("--version", action="version", version=f"rispls {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a preset or scenario file")
    run.add_argument("target", help="preset name or path to a JSON scenario file")
    run.add_argument("--seed", type=int, help="64-bit seed")
    run.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    run.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a scenario key (repeatable)")
    run.add_argument("--svg", action="store_true", help="also write plot.svg")
    run.add_argument("--out", default="rispls-out", help="output directory (default: %(default)s)")
    run.add_argument("--workers", type=int, default=None, help="worker processes (results do not depend on it)")
    run.add_argument(
        "--report-mean-snr",
        action="store_true",
        help="also report the secrecy rate evaluated at the mean SNRs",
    )
    run.set_defaults(func=cmd_run)

    lp = sub.add_parser("list-presets", help="list built-in experiments")
    lp.set_defaults(func=cmd_list_presets)

    val = sub.add_parser("validate", help="check a scenario file and print its expansion")
    val.add_argument("file")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"rispls: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"rispls: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
