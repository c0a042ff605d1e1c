"""Command-line front end: run experiment presets or custom configs to CSV.

Each preset expands to a list of experiment configs reproducing one of the
standard measurement grids (rate and NMSE curves).  Output is a commented
CSV; with --plot, a rendered figure lands next to it.  Exit codes: 0 ok,
2 bad arguments, 3 resource/IO failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, replace

from . import __version__
from .bounds import bound_table
from .channel import CorrelatedGeometry
from .errors import ResourceLimitError
from .harness import ExperimentConfig, SweepRow, run_experiment, sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3

PRESETS = ("solvable-vs-n", "solvable-budget48", "success-iid",
           "success-correlated", "nmse-vs-snr", "bounds-only")

EXPERIMENT_COLUMNS = (
    "K", "L", "N", "M", "snr_db", "channel", "trials",
    "p_single_solvable", "se_single_solvable",
    "p_all_solvable", "se_all_solvable",
    "p_single_success", "se_single_success",
    "p_all_success", "se_all_success",
    "false_detect_rate", "se_false_detect", "nmse",
    "single_exact", "single_upper", "single_lower",
    "all_exact", "all_upper", "all_lower",
)

BOUNDS_COLUMNS = ("N", "single_exact", "single_upper", "single_lower",
                  "all_exact", "all_upper", "all_lower")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="superpreamble",
        description="Monte Carlo simulator for multi-phase random-access "
                    "preambles with massive MIMO reception.")
    p.add_argument("--preset", choices=PRESETS,
                   help="named experiment grid (otherwise a single custom run)")
    p.add_argument("--K", type=int, help="preamble pool size")
    p.add_argument("--L", type=int, help="preamble phases per super preamble")
    p.add_argument("--N", type=int, help="simultaneous users")
    p.add_argument("--N-max", type=int, dest="N_max",
                   help="largest N for bounds-only tables")
    p.add_argument("--M", type=int, default=128, help="base-station antennas")
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db",
                   help="per-antenna preamble SNR in dB (inf = noiseless)")
    p.add_argument("--channel", choices=("iid", "correlated"), default="iid")
    p.add_argument("--Q", type=int, default=50, help="faded paths (correlated)")
    p.add_argument("--omega", type=float, default=0.5,
                   help="antenna spacing in wavelengths")
    p.add_argument("--angle-spread-deg", type=float, default=40.0,
                   dest="angle_spread_deg")
    p.add_argument("--th", type=float, default=0.4, help="detection threshold")
    p.add_argument("--prune-th", type=float, default=0.5, dest="prune_th",
                   help="estimated-channel norm below which a row is false")
    p.add_argument("--trials", type=int, default=None,
                   help="Monte Carlo trials per config (preset-dependent default)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes (never affects results)")
    p.add_argument("--out", type=str, help="output CSV path")
    p.add_argument("--dry-run", action="store_true",
                   help="print the expanded config list without running")
    p.add_argument("--plot", action="store_true",
                   help="also render a PNG figure next to the CSV")
    return p


@dataclass(frozen=True)
class _Plan:
    """A preset expanded to sweep families plus labeling info."""

    kind: str                     # "rates" | "nmse" | "bounds"
    families: list                # [(base_cfg, variable, values)]


def _geometry(args) -> CorrelatedGeometry:
    return CorrelatedGeometry.from_degrees(Q=args.Q, omega=args.omega,
                                           spread_deg=args.angle_spread_deg)


def _base(args, trials_default: int, **overrides) -> ExperimentConfig:
    base = dict(M=args.M, snr_db=args.snr_db, TH=args.th,
                prune_threshold=args.prune_th, geometry=_geometry(args),
                trials=args.trials if args.trials is not None else trials_default,
                seed=args.seed)
    base.update(overrides)
    return ExperimentConfig(**base)


def expand_preset(args) -> _Plan:
    name = args.preset
    n_values = list(range(1, 21))
    if name == "solvable-vs-n":
        fams = [(_base(args, 100_000, K=K, L=L, N=1, measure_detection=False),
                 "N", n_values)
                for K in (8, 16) for L in (2, 3)]
        return _Plan(kind="rates", families=fams)
    if name == "solvable-budget48":
        fams = [(_base(args, 100_000, K=48 // L, L=L, N=1, measure_detection=False),
                 "N", n_values)
                for L in (1, 2, 3, 4, 6)]
        return _Plan(kind="rates", families=fams)
    if name in ("success-iid", "success-correlated"):
        channel = "iid" if name == "success-iid" else "correlated"
        fams = [(_base(args, 10_000, K=48 // L, L=L, N=1, channel_model=channel),
                 "N", n_values)
                for L in (1, 2, 3)]
        return _Plan(kind="rates", families=fams)
    if name == "nmse-vs-snr":
        snrs = [0.0, 5.0, 10.0, 15.0, 20.0]
        fams = [(_base(args, 10_000, K=16, L=3, N=N, channel_model="correlated"),
                 "snr_db", snrs)
                for N in (1, 4, 7)]
        return _Plan(kind="nmse", families=fams)
    raise ValueError(f"unknown preset {name!r}")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def emit_csv(rows: list[dict], columns: tuple[str, ...], path: str,
             metadata: list[str]):
    """Write `# key=value` metadata lines, a header, then formatted rows."""
    lines = [f"# {m}" for m in metadata]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in columns))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _row_from_sweep(row: SweepRow) -> dict:
    cfg, m = row.cfg, row.metrics
    sb, ab = row.single_bounds, row.all_bounds
    return {
        "K": cfg.K, "L": cfg.L, "N": cfg.N, "M": cfg.M,
        "snr_db": cfg.snr_db, "channel": cfg.channel_model, "trials": m.trials_run,
        "p_single_solvable": m.p_single_solvable,
        "se_single_solvable": m.se_single_solvable,
        "p_all_solvable": m.p_all_solvable, "se_all_solvable": m.se_all_solvable,
        "p_single_success": m.p_single_success,
        "se_single_success": m.se_single_success,
        "p_all_success": m.p_all_success, "se_all_success": m.se_all_success,
        "false_detect_rate": m.false_detect_rate,
        "se_false_detect": m.se_false_detect, "nmse": m.nmse_mean,
        "single_exact": sb.exact, "single_upper": sb.upper, "single_lower": sb.lower,
        "all_exact": ab.exact, "all_upper": ab.upper, "all_lower": ab.lower,
    }


def _config_summary(cfg: ExperimentConfig) -> str:
    parts = [f"K={cfg.K}", f"L={cfg.L}", f"N={cfg.N}", f"M={cfg.M}",
             f"snr_db={_fmt(cfg.snr_db)}", f"channel={cfg.channel_model}",
             f"TH={_fmt(cfg.TH)}", f"prune={_fmt(cfg.prune_threshold)}",
             f"trials={cfg.trials}", f"detect={int(cfg.measure_detection)}"]
    if cfg.channel_model == "correlated":
        g = cfg.geometry
        parts.append(f"Q={g.Q} omega={_fmt(g.omega)} "
                     f"spread_deg={_fmt(math.degrees(g.phi_S))}")
    return " ".join(parts)


def _print_summary(row: dict):
    nm = f" nmse={_fmt(row['nmse'])}" if row["nmse"] is not None else ""
    succ = (f" p_succ={_fmt(row['p_single_success'])}"
            if row["p_single_success"] is not None else "")
    print(f"K={row['K']} L={row['L']} N={row['N']} snr={_fmt(row['snr_db'])}dB "
          f"p_solv={_fmt(row['p_single_solvable'])}"
          f" p_all={_fmt(row['p_all_solvable'])}{succ}{nm}")


def _run_bounds_only(args) -> int:
    missing = [f for f, v in (("--K", args.K), ("--L", args.L),
                              ("--N-max", args.N_max)) if v is None]
    if missing:
        print(f"bounds-only preset requires {', '.join(missing)}", file=sys.stderr)
        return EXIT_USAGE
    table = bound_table(args.K, args.L, args.N_max)
    rows = [{"N": sb.N, "single_exact": sb.exact, "single_upper": sb.upper,
             "single_lower": sb.lower, "all_exact": ab.exact,
             "all_upper": ab.upper, "all_lower": ab.lower}
            for sb, ab in table]
    if args.dry_run:
        print(f"bounds-only K={args.K} L={args.L} N=1..{args.N_max}")
        return EXIT_OK
    meta = [f"superpreamble v{__version__}", "preset=bounds-only",
            f"K={args.K} L={args.L} N_max={args.N_max}"]
    emit_csv(rows, BOUNDS_COLUMNS, args.out, meta)
    for row in rows:
        print(f"N={row['N']} single_upper={_fmt(row['single_upper'])} "
              f"all_upper={_fmt(row['all_upper'])}")
    if args.plot:
        from . import plots
        print(f"figure: {plots.render_bounds(rows, args.out)}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.preset == "bounds-only":
            if args.out is None and not args.dry_run:
                print("--out is required", file=sys.stderr)
                return EXIT_USAGE
            return _run_bounds_only(args)

        if args.preset is not None:
            plan = expand_preset(args)
        else:
            missing = [f for f, v in (("--K", args.K), ("--L", args.L),
                                      ("--N", args.N)) if v is None]
            if missing:
                print(f"custom run requires {', '.join(missing)}", file=sys.stderr)
                return EXIT_USAGE
            cfg = _base(args, 10_000, K=args.K, L=args.L, N=args.N,
                        channel_model=args.channel)
            plan = _Plan(kind="rates", families=[(cfg, "N", [args.N])])

        if args.dry_run:
            for base_cfg, variable, values in plan.families:
                for v in values:
                    print(_config_summary(replace(base_cfg, **{variable: v})))
            return EXIT_OK
        if args.out is None:
            print("--out is required", file=sys.stderr)
            return EXIT_USAGE

        rows = []
        for base_cfg, variable, values in plan.families:
            for srow in sweep(base_cfg, variable, values, threads=args.threads):
                row = _row_from_sweep(srow)
                rows.append(row)
                _print_summary(row)
        meta = [f"superpreamble v{__version__}",
                f"preset={args.preset or 'custom'}", f"seed={args.seed}"]
        meta += [f"family: {_config_summary(b)} sweep={var}"
                 for b, var, _ in plan.families]
        emit_csv(rows, EXPERIMENT_COLUMNS, args.out, meta)
        if args.plot:
            from . import plots
            if plan.kind == "nmse":
                print(f"figure: {plots.render_nmse(rows, args.out)}")
            else:
                print(f"figure: {plots.render_rates(rows, args.out)}")
        return EXIT_OK
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
