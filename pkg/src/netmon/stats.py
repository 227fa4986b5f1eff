"""Model-free summary statistics for dynamic networks.

Five monitored statistics per snapshot sequence: density, max degree,
their difference and sum combinations, and a two-stage windowed scan
statistic built from order-k neighborhood edge counts (k = 0, 1, 2).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .network import DynamicNetwork, Snapshot

__all__ = [
    "StatName",
    "StatSeries",
    "SUMMARY_STATS",
    "ALL_STATS",
    "density",
    "node_degrees",
    "max_degree",
    "diff_stat",
    "sum_stat",
    "neighborhood_size",
    "neighborhood_sizes",
    "scan_series",
    "compute_series",
    "compute_all",
    "write_series_csv",
]

SCAN_ORDERS = (0, 1, 2)


class StatName(str, Enum):
    DENSITY = "density"
    MAX_DEGREE = "max_degree"
    DIFF = "diff"
    SUM = "sum"
    SCAN = "scan"


SUMMARY_STATS = (StatName.DENSITY, StatName.MAX_DEGREE, StatName.DIFF, StatName.SUM)
ALL_STATS = SUMMARY_STATS + (StatName.SCAN,)


@dataclass(frozen=True, eq=False)
class StatSeries:
    """One statistic evaluated over all T snapshots.

    ``values`` has length T and is indexed by 0-based time; entries before
    the first defined time are NaN.  Scan series are undefined for
    t <= 2m (the two start-up windows); all other statistics are defined
    from t = 1.
    """

    name: StatName
    values: np.ndarray
    m: int | None = None

    @property
    def n_times(self) -> int:
        return int(self.values.shape[0])

    @property
    def first_defined(self) -> int:
        """First 1-based time with a defined value."""
        if self.name == StatName.SCAN:
            assert self.m is not None
            return 2 * self.m + 1
        return 1

    def value_at(self, t: int) -> float:
        """Value at 1-based time t."""
        return float(self.values[t - 1])


def density(s: Snapshot) -> float:
    """Edge weight per possible edge.

    Directed: sum over ordered pairs / n(n-1).  Undirected: sum over
    unordered pairs / C(n, 2) -- each edge counted once.  Count networks
    may exceed 1.
    """
    n = s.n
    if n < 2:
        raise ValueError("density requires n >= 2")
    # Undirected matrices are stored symmetric, so both cases reduce to
    # the full-matrix sum over n(n-1).
    return float(s.weights.sum()) / (n * (n - 1))


def node_degrees(s: Snapshot) -> np.ndarray:
    """Weighted degree per node: in + out if directed, edge sum otherwise."""
    if s.directed:
        return s.weights.sum(axis=1) + s.weights.sum(axis=0)
    return s.weights.sum(axis=1)


def max_degree(s: Snapshot) -> float:
    """Largest weighted node degree in the snapshot."""
    if s.n < 1:
        raise ValueError("max_degree requires n >= 1")
    return float(node_degrees(s).max())


def diff_stat(max_deg: float, dens: float, n: int) -> float:
    """Difference combination: max degree scaled by 1/n, minus density."""
    return max_deg / n - dens


def sum_stat(max_deg: float, dens: float, n: int) -> float:
    """Sum combination: max degree scaled by 1/n, plus density."""
    return max_deg / n + dens


def _closed_reach(weights: np.ndarray, k: int) -> np.ndarray:
    """Boolean matrix whose row i is the closed k-hop neighborhood of i.

    Hops follow edges ignoring direction so that directed networks still
    have meaningful neighborhoods.
    """
    n = weights.shape[0]
    adj = (weights + weights.T) > 0
    reach = adj | np.eye(n, dtype=bool)
    for _ in range(k - 1):
        reach = reach @ reach
    return reach


def neighborhood_sizes(s: Snapshot, k: int) -> np.ndarray:
    """Order-k neighborhood size for every node.

    k = 0 is the weighted degree.  For k >= 1 the size is the total edge
    weight of the subgraph induced on the closed k-hop neighborhood;
    the induced count respects directedness (ordered pairs for directed,
    unordered for undirected).
    """
    if k not in SCAN_ORDERS:
        raise ValueError(f"neighborhood order must be one of {SCAN_ORDERS}")
    if k == 0:
        return node_degrees(s).astype(float)
    reach = _closed_reach(s.weights, k).astype(float)
    w = s.weights.astype(float)
    sizes = ((reach @ w) * reach).sum(axis=1)
    if not s.directed:
        sizes = sizes / 2.0
    return sizes


def neighborhood_size(s: Snapshot, i: int, k: int) -> float:
    """Order-k neighborhood size of a single node."""
    return float(neighborhood_sizes(s, k)[i])


def _trailing_mean_sd(x: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Trailing-window mean and sample sd aligned to targets ``x[m:]``.

    Returns arrays of length len(x) - m where entry j describes the window
    ``x[j:j+m]``, i.e. the m values strictly before target ``x[j+m]``.
    """
    win = sliding_window_view(x, m, axis=0)[:-1]
    return win.mean(axis=-1), win.std(axis=-1, ddof=1)


def _standardize_trailing(x: np.ndarray, m: int) -> np.ndarray:
    """(x_t - trailing mean) / max(trailing sample sd, 1) for targets x[m:]."""
    mean, sd = _trailing_mean_sd(x, m)
    return (x[m:] - mean) / np.maximum(sd, 1.0)


def scan_series(net: DynamicNetwork, m: int = 20) -> StatSeries:
    """Two-stage standardized scan statistic over a moving window m.

    Per order k in {0, 1, 2}: each node's neighborhood-size series is
    standardized against its trailing m-window (sample sd floored at 1),
    the per-time max over nodes is taken, and that max series is
    standardized the same way.  The reported value is the max over k,
    defined for t > 2m.
    """
    T, n = net.n_times, net.n_nodes
    if m < 2:
        raise ValueError("scan window m must be >= 2")
    if T <= 2 * m:
        raise ValueError(f"scan statistic needs T > 2m (T={T}, m={m})")
    values = np.full(T, np.nan)
    per_order = np.empty((len(SCAN_ORDERS), T - 2 * m))
    for row, k in enumerate(SCAN_ORDERS):
        sizes = np.empty((T, n))
        for t0 in range(T):
            sizes[t0] = neighborhood_sizes(net.snapshot(t0 + 1), k)
        node_std = _standardize_trailing(sizes, m)
        per_time_max = node_std.max(axis=1)
        per_order[row] = _standardize_trailing(per_time_max, m)
    values[2 * m :] = per_order.max(axis=0)
    return StatSeries(name=StatName.SCAN, values=values, m=m)


def compute_series(net: DynamicNetwork, name: StatName, m: int = 20) -> StatSeries:
    """Compute one named statistic over the whole network."""
    if name == StatName.SCAN:
        return scan_series(net, m)
    T, n = net.n_times, net.n_nodes
    dens = net.weights.sum(axis=(1, 2)).astype(float) / (n * (n - 1))
    if net.directed:
        degs = net.weights.sum(axis=2) + net.weights.sum(axis=1)
    else:
        degs = net.weights.sum(axis=2)
    dmax = degs.max(axis=1).astype(float)
    if name == StatName.DENSITY:
        values = dens
    elif name == StatName.MAX_DEGREE:
        values = dmax
    elif name == StatName.DIFF:
        values = dmax / n - dens
    elif name == StatName.SUM:
        values = dmax / n + dens
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unknown statistic {name}")
    return StatSeries(name=name, values=values)


def compute_all(
    net: DynamicNetwork,
    names: Iterable[StatName] = ALL_STATS,
    m: int = 20,
) -> dict[StatName, StatSeries]:
    """Compute several statistics at once, keyed by name."""
    return {name: compute_series(net, name, m=m) for name in names}


def write_series_csv(
    series: Iterable[StatSeries], dest: Union[str, Path, IO[str]]
) -> None:
    """Export series as ``t,name,value`` rows, omitting undefined entries."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_series_csv(series, fh)
        return
    writer = csv.writer(dest)
    writer.writerow(["t", "name", "value"])
    for s in series:
        for t0, v in enumerate(s.values):
            if not np.isnan(v):
                writer.writerow([t0 + 1, s.name.value, repr(float(v))])
