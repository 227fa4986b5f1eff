"""Dynamic-network data model, validation, and edge-list serialization.

A dynamic network is an ordered sequence of weighted adjacency snapshots
over discrete time.  Time indices are 1-based at API boundaries
(t = 1..T, Phase I is t <= t1).  Node indices are 0-based everywhere in
memory; the edge-list file format is 1-based, and the parser owns that
boundary.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Union

import numpy as np

__all__ = [
    "EdgeKind",
    "Snapshot",
    "DynamicNetwork",
    "EdgeListError",
    "validate",
    "read_edge_list",
    "write_edge_list",
]


class EdgeKind(str, Enum):
    """Edge-weight domain: 0/1 indicators or nonnegative counts."""

    BINARY = "binary"
    COUNT = "count"


class EdgeListError(ValueError):
    """Malformed edge-list input (bad header, record, index, or weight)."""


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One weighted adjacency matrix.

    ``weights[i, j]`` is the weight of the ordered pair (i, j).  Undirected
    snapshots store the symmetric matrix in full, so each unordered edge
    appears twice.
    """

    weights: np.ndarray
    directed: bool
    edge_kind: EdgeKind

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])


@dataclass(frozen=True, eq=False)
class DynamicNetwork:
    """Snapshot sequence sharing one node set, directedness, and edge kind.

    ``weights`` has shape (T, n, n); ``weights[t - 1]`` is the snapshot at
    1-based time t.  Snapshots are immutable after construction and safe to
    share across parallel workers.
    """

    weights: np.ndarray
    directed: bool
    edge_kind: EdgeKind
    t1: int

    @property
    def n_times(self) -> int:
        return int(self.weights.shape[0])

    @property
    def n_nodes(self) -> int:
        return int(self.weights.shape[1])

    def snapshot(self, t: int) -> Snapshot:
        """Return the snapshot at 1-based time t."""
        if not 1 <= t <= self.n_times:
            raise IndexError(f"t={t} outside 1..{self.n_times}")
        return Snapshot(self.weights[t - 1], self.directed, self.edge_kind)

    @property
    def snapshots(self) -> list[Snapshot]:
        return [self.snapshot(t) for t in range(1, self.n_times + 1)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DynamicNetwork):
            return NotImplemented
        return (
            self.directed == other.directed
            and self.edge_kind == other.edge_kind
            and self.t1 == other.t1
            and self.weights.shape == other.weights.shape
            and bool(np.array_equal(self.weights, other.weights))
        )


def validate(net: DynamicNetwork) -> list[str]:
    """Check every type invariant; return one message per violation.

    An empty list means the network is well formed.  Messages name the
    1-based snapshot time and the rule violated; node indices are 0-based.
    """
    findings: list[str] = []
    w = net.weights
    if w.ndim != 3 or w.shape[1] != w.shape[2]:
        return [f"weights must have shape (T, n, n), got {w.shape}"]
    T = net.n_times
    if not 1 <= net.t1 < T:
        findings.append(f"t1={net.t1} outside 1..{T - 1}")
    if not np.issubdtype(w.dtype, np.integer):
        findings.append(f"weights dtype {w.dtype} is not integer")
    if (w < 0).any():
        for t0, i, j in zip(*np.nonzero(w < 0)):
            findings.append(f"t={t0 + 1}: negative weight at ({i}, {j})")
    diag = np.diagonal(w, axis1=1, axis2=2)
    for t0, i in zip(*np.nonzero(diag != 0)):
        findings.append(f"t={t0 + 1}: self-loop at node {i}")
    if net.edge_kind == EdgeKind.BINARY:
        bad = (w != 0) & (w != 1)
        for t0, i, j in zip(*np.nonzero(bad)):
            findings.append(f"t={t0 + 1}: non-binary weight {w[t0, i, j]} at ({i}, {j})")
    if not net.directed:
        asym = w != np.swapaxes(w, 1, 2)
        for t0, i, j in zip(*np.nonzero(asym)):
            if i < j:
                findings.append(f"t={t0 + 1}: asymmetric pair ({i}, {j})")
    return findings


_HEADER_RE = re.compile(
    r"#n=(\d+),T=(\d+),t1=(\d+),directed=([01]),kind=(binary|count)\s*$"
)


def write_edge_list(net: DynamicNetwork, dest: Union[str, Path, IO[str]]) -> None:
    """Write a network as a comma-separated edge list.

    Format: a header line ``#n=<n>,T=<T>,t1=<t1>,directed=<0|1>,kind=<kind>``
    followed by ``t,i,j,w`` records (all 1-based), one per nonzero ordered
    pair for directed networks and one per unordered pair i<j otherwise.
    """
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fh:
            write_edge_list(net, fh)
        return
    dest.write(
        f"#n={net.n_nodes},T={net.n_times},t1={net.t1},"
        f"directed={int(net.directed)},kind={net.edge_kind.value}\n"
    )
    for t0 in range(net.n_times):
        w = net.weights[t0]
        ii, jj = np.nonzero(w if net.directed else np.triu(w, 1))
        for i, j in zip(ii, jj):
            dest.write(f"{t0 + 1},{i + 1},{j + 1},{w[i, j]}\n")


def read_edge_list(src: Union[str, Path, IO[str]]) -> DynamicNetwork:
    """Parse an edge-list file written by :func:`write_edge_list`.

    Raises :class:`EdgeListError` on a malformed header or record,
    out-of-range node index, time outside 1..T, negative weight, or
    records not sorted by t.
    """
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as fh:
            return read_edge_list(fh)
    header = src.readline()
    m = _HEADER_RE.match(header.strip())
    if m is None:
        raise EdgeListError(f"bad header line: {header!r}")
    n, T, t1 = int(m.group(1)), int(m.group(2)), int(m.group(3))
    directed = m.group(4) == "1"
    kind = EdgeKind(m.group(5))
    if n < 1 or T < 2 or not 1 <= t1 < T:
        raise EdgeListError(f"inconsistent header dimensions n={n}, T={T}, t1={t1}")
    weights = np.zeros((T, n, n), dtype=np.int64)
    prev_t = 1
    for lineno, line in enumerate(src, start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise EdgeListError(f"line {lineno}: expected 4 fields, got {len(parts)}")
        try:
            t, i, j, w = (int(p) for p in parts)
        except ValueError as exc:
            raise EdgeListError(f"line {lineno}: non-integer field ({exc})") from None
        if not 1 <= t <= T:
            raise EdgeListError(f"line {lineno}: t={t} outside 1..{T}")
        if t < prev_t:
            raise EdgeListError(f"line {lineno}: records not sorted by t")
        prev_t = t
        if not (1 <= i <= n and 1 <= j <= n):
            raise EdgeListError(f"line {lineno}: node index outside 1..{n}")
        if i == j:
            raise EdgeListError(f"line {lineno}: self-loop record {i},{j}")
        if w < 0:
            raise EdgeListError(f"line {lineno}: negative weight {w}")
        if kind == EdgeKind.BINARY and w > 1:
            raise EdgeListError(f"line {lineno}: weight {w} invalid for binary network")
        if not directed and i > j:
            raise EdgeListError(f"line {lineno}: undirected record requires i<j")
        weights[t - 1, i - 1, j - 1] = w
        if not directed:
            weights[t - 1, j - 1, i - 1] = w
    return DynamicNetwork(weights=weights, directed=directed, edge_kind=kind, t1=t1)
