from __future__ import annotations

import numpy as np
import pytest

from netmon.network import DynamicNetwork, EdgeKind


def random_network(
    rng: np.random.Generator,
    n: int,
    T: int,
    directed: bool,
    edge_kind: EdgeKind,
    density: float = 0.4,
    max_count: int = 4,
) -> DynamicNetwork:
    """Small random network for structural tests (not model-based)."""
    if edge_kind == EdgeKind.BINARY:
        w = (rng.random((T, n, n)) < density).astype(np.int64)
    else:
        w = rng.poisson(density * max_count, size=(T, n, n)).astype(np.int64)
    for t in range(T):
        np.fill_diagonal(w[t], 0)
    if not directed:
        w = np.triu(w, 1) + np.swapaxes(np.triu(w, 1), 1, 2)
    return DynamicNetwork(weights=w, directed=directed, edge_kind=edge_kind, t1=max(1, T // 2))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
