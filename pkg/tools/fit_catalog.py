#!/usr/bin/env python3
"""Fit / audit the density-scaling catalog.

For every catalog cell this script measures the empirical Phase I density
and reports the error against the cell's target.  With --sweep it instead
scans a grid of candidate calibration factors (the latent-variance scale
for the latent space model, the pair-rate factor for the block model) and
prints the per-cell error for each candidate, which is how the shipped
factors in src/netmon/data/catalog.json were chosen.

Usage:
  python tools/fit_catalog.py                 # audit shipped catalog
  python tools/fit_catalog.py --reps 50
  python tools/fit_catalog.py --sweep dlsm-binary 0.60 0.65 0.70
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from netmon.ddcsbm import generate as generate_ddcsbm
from netmon.dlsm import generate as generate_dlsm
from netmon.network import EdgeKind
from netmon.scenario import Scenario, catalog_cells, generate_network, generator_config


def phase1_density(scenario: Scenario, reps: int) -> float:
    vals = []
    for r in range(reps):
        net = generate_network(scenario, scenario.base_seed + r, with_anomaly=False)
        n = net.n_nodes
        vals.append(net.weights[: scenario.t1].sum(axis=(1, 2)).mean() / (n * (n - 1)))
    return float(np.mean(vals))


def audit(reps: int, seed: int) -> int:
    worst = 0.0
    for model in ("dlsm", "ddcsbm"):
        for kind in EdgeKind:
            for target in sorted(catalog_cells(model, kind)):
                sc = Scenario(
                    id="fit",
                    model=model,
                    edge_kind=kind,
                    phi=0.5,
                    target_density=target,
                    T=55,
                    t1=50,
                    base_seed=seed,
                )
                emp = phase1_density(sc, reps)
                err = emp - target
                worst = max(worst, abs(err))
                print(
                    f"{model:7s} {kind.value:6s} target={target:.2f} "
                    f"empirical={emp:.4f} err={err:+.4f}"
                )
    print(f"worst |err| = {worst:.4f}")
    return 0 if worst <= 0.02 else 1


def sweep(cell: str, factors: list[float], reps: int, seed: int) -> int:
    model, kind_name = cell.split("-")
    kind = EdgeKind(kind_name)
    for factor in factors:
        errs = []
        for target, a_scale in sorted(catalog_cells(model, kind).items()):
            sc = Scenario(
                id="fit", model=model, edge_kind=kind, phi=0.5,
                target_density=target, T=55, t1=50, base_seed=seed,
            )
            cfg = generator_config(sc, seed)
            if model == "dlsm":
                cfg = replace(cfg, sigma2=factor * (1 - sc.phi**2))
                gen = generate_dlsm
            else:
                cfg = replace(cfg, pair_rate_factor=factor)
                gen = generate_ddcsbm
            vals = []
            for r in range(reps):
                net = gen(replace(cfg, seed=seed + r))
                n = net.n_nodes
                vals.append(net.weights[:50].sum(axis=(1, 2)).mean() / (n * (n - 1)))
            errs.append(float(np.mean(vals)) - target)
        spread = ", ".join(f"{e:+.4f}" for e in errs)
        print(f"{cell} factor={factor}: errors [{spread}] worst={max(abs(e) for e in errs):.4f}")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--seed", type=int, default=7000)
    parser.add_argument(
        "--sweep",
        nargs="+",
        default=None,
        metavar=("CELL", "FACTOR"),
        help="model-kind (e.g. dlsm-binary) followed by candidate factors",
    )
    args = parser.parse_args()
    if args.sweep:
        return sweep(args.sweep[0], [float(f) for f in args.sweep[1:]], args.reps, args.seed)
    return audit(args.reps, args.seed)


if __name__ == "__main__":
    sys.exit(main())
