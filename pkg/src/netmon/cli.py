"""Command-line front end.

Subcommands: generate networks, compute statistics, monitor a single
network, calibrate thresholds, run scenario suites, and pivot result
tables.  All outputs are CSV and deterministic given the flags.

Exit codes: 0 success, 2 usage error, 3 input/schema error, 4 runtime
error.  The environment variable NETMON_SEED overrides seeds for smoke
tests.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace
from pathlib import Path

from .evaluate import write_records_csv, write_summary_csv
from .monitor import (
    SigmaEstimator,
    calibrate_q_phase1,
    fit_chart,
    scan_monitor,
    shewhart_monitor,
)
from .network import EdgeKind, EdgeListError, read_edge_list, write_edge_list
from .scenario import (
    CatalogError,
    Scenario,
    ScenarioError,
    calibration_table,
    generate_network,
    load_scenarios,
    run_scenario,
)
from .stats import ALL_STATS, StatName, compute_all, compute_series, write_series_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_RUNTIME = 4

_STAT_CHOICES = [s.value for s in ALL_STATS] + ["all"]


def _env_seed(default: int) -> int:
    raw = os.environ.get("NETMON_SEED")
    return int(raw) if raw else default


def _parse_stats(value: str) -> tuple[StatName, ...]:
    if value == "all":
        return ALL_STATS
    return (StatName(value),)


def _cmd_generate(args: argparse.Namespace) -> int:
    seed = _env_seed(args.seed)
    scenario = Scenario(
        id="cli-generate",
        model=args.model,
        edge_kind=EdgeKind(args.kind),
        phi=args.phi,
        target_density=args.density,
        n=args.n,
        T=args.T,
        t1=args.t1,
        base_seed=seed,
    )
    net = generate_network(scenario, seed, with_anomaly=False)
    write_edge_list(net, args.out)
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    net = read_edge_list(args.in_path)
    series = compute_all(net, _parse_stats(args.stat), m=args.m)
    write_series_csv(series.values(), args.out)
    return EXIT_OK


def _cmd_monitor(args: argparse.Namespace) -> int:
    net = read_edge_list(args.in_path)
    name = StatName(args.stat)
    estimator = SigmaEstimator(args.estimator)
    series = compute_series(net, name, m=args.m)
    q = args.q
    if q is None:
        q = calibrate_q_phase1(series, net.t1, estimator, args.p)
    if name == StatName.SCAN:
        stream = scan_monitor(series, q, net.t1)
    else:
        chart = fit_chart(series, net.t1, estimator, q)
        stream = shewhart_monitor(series, chart, net.t1)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "statistic", "q", "signal"])
        for t, a in zip(stream.times, stream.signals):
            writer.writerow([int(t), name.value, q, int(a)])
    return EXIT_OK


def _select_scenarios(args: argparse.Namespace) -> list[Scenario]:
    scenarios = load_scenarios(args.scenarios)
    if getattr(args, "id", None):
        matched = [s for s in scenarios if s.id == args.id]
        if not matched:
            raise ScenarioError(f"no scenario with id {args.id!r}")
        return matched
    return scenarios


def _cmd_calibrate(args: argparse.Namespace) -> int:
    scenarios = _select_scenarios(args)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario_id", "statistic", "estimator", "q", "far"])
        for scenario in scenarios:
            if args.p is not None or args.reps is not None:
                scenario = replace(
                    scenario,
                    p_target=args.p if args.p is not None else scenario.p_target,
                    calib_reps=args.reps if args.reps is not None else scenario.calib_reps,
                )
            _, rows = calibration_table(scenario, jobs=args.jobs)
            for row in rows:
                writer.writerow(
                    [scenario.id, row["statistic"], row["estimator"], row["q"], repr(row["far"])]
                )
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    scenarios = _select_scenarios(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed_override = os.environ.get("NETMON_SEED")
    all_records = []
    all_summary = []
    calib_rows = []
    n_errors = 0
    for scenario in scenarios:
        if seed_override:
            scenario = replace(scenario, base_seed=int(seed_override))
        result = run_scenario(scenario, jobs=args.jobs)
        all_records.extend(result.records)
        all_summary.extend(result.summary)
        for stat, q in result.calibration.items():
            calib_rows.append([scenario.id, stat.value, scenario.estimator.value, q])
        for err in result.errors:
            n_errors += 1
            print(f"error: {scenario.id}: {err}", file=sys.stderr)
    write_records_csv(all_records, out_dir / "results.csv")
    write_summary_csv(all_summary, out_dir / "summary.csv")
    with open(out_dir / "calibration.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario_id", "statistic", "estimator", "q"])
        writer.writerows(calib_rows)
    return EXIT_RUNTIME if n_errors else EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    summary_path = Path(args.results) / "summary.csv"
    if not summary_path.exists():
        raise FileNotFoundError(f"missing {summary_path}")
    column = {"dr": "mean_dr", "auc": "mean_auc", "far": "mean_far"}[args.table]
    grid: dict[str, dict[str, str]] = {}
    stats_seen: list[str] = []
    with open(summary_path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            cell = row[column]
            grid.setdefault(row["scenario_id"], {})[row["statistic"]] = cell
            if row["statistic"] not in stats_seen:
                stats_seen.append(row["statistic"])
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario_id"] + stats_seen)
        for scenario_id, cells in grid.items():
            writer.writerow([scenario_id] + [cells.get(s, "") for s in stats_seen])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netmon",
        description="Simulate, perturb, and monitor temporally-evolving networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a network into an edge-list file")
    p.add_argument("--model", required=True, choices=["dlsm", "ddcsbm"])
    p.add_argument("--kind", required=True, choices=[k.value for k in EdgeKind])
    p.add_argument("--phi", type=float, default=0.5, help="temporal correlation")
    p.add_argument("--density", type=float, default=0.11, help="target E[W], a catalog cell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--T", type=int, default=110)
    p.add_argument("--t1", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("stats", help="compute summary statistics from an edge list")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--stat", default="all", choices=_STAT_CHOICES)
    p.add_argument("--m", type=int, default=20, help="scan moving-window length")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("monitor", help="run one monitoring rule over an edge list")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--stat", required=True, choices=[s.value for s in ALL_STATS])
    p.add_argument("--estimator", default="corr_sd", choices=[e.value for e in SigmaEstimator])
    group = p.add_mutually_exclusive_group()
    group.add_argument("--q", type=float, default=None, help="threshold multiplier")
    group.add_argument("--p", type=float, default=0.03, help="target false alarm rate")
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_monitor)

    p = sub.add_parser("calibrate", help="calibrate q from null replicates of a scenario")
    p.add_argument("--scenario", dest="scenarios", required=True, help="scenario YAML file")
    p.add_argument("--id", default=None, help="calibrate only this scenario id")
    p.add_argument("--p", type=float, default=None, help="override target false alarm rate")
    p.add_argument("--reps", type=int, default=None, help="override calibration replicates")
    p.add_argument("--jobs", type=int, default=-1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("run", help="run a scenario suite")
    p.add_argument("--scenarios", required=True, help="scenario YAML file")
    p.add_argument("--id", default=None, help="run only this scenario id")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=-1, help="parallel workers (-1: all cores)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("report", help="pivot a completed run into a metric grid")
    p.add_argument("--results", required=True, help="directory written by `run`")
    p.add_argument("--table", required=True, choices=["dr", "auc", "far"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdgeListError, ScenarioError, CatalogError, FileNotFoundError) as exc:
        print(f"netmon: input error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, OSError) as exc:
        print(f"netmon: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
