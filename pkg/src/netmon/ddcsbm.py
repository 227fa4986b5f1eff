"""Dynamic degree-corrected stochastic block model generator.

Nodes move between K communities via a per-node Markov chain; per-node
communication propensities follow an anchored white-noise process and are
rescaled to mean 1 within each community at every time step.  Edge counts
are Poisson with rate proportional to the propensity product and the
community-pair rate matrix; binary networks threshold the counts.
Output is undirected.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .anomaly import (
    AnomalyFamily,
    AnomalySpec,
    effective_magnitude,
    effective_or,
)
from .network import DynamicNetwork, EdgeKind

__all__ = [
    "RescaleMode",
    "DdcsbmConfig",
    "default_transition_matrix",
    "DEFAULT_OMEGA",
    "generate_communities",
    "generate_propensities",
    "rescale_propensities",
    "generate",
]

_COMMUNITY_STREAM = 0
_PROPENSITY_STREAM = 1
_EDGE_STREAM = 2

# Community-pair rate matrix used throughout the simulation study:
# intra-community rates dominate and the diagonal entries are distinct
# (identical diagonal entries would make communities unidentifiable).
DEFAULT_OMEGA = np.array(
    [
        [0.70, 0.20, 0.25],
        [0.20, 0.60, 0.30],
        [0.25, 0.30, 0.50],
    ]
)


class RescaleMode(str, Enum):
    """Denominator used when rescaling propensities within a community."""

    MEAN = "mean"
    SUM = "sum"


def default_transition_matrix(K: int, stay: float = 0.96) -> np.ndarray:
    """Row-stochastic K x K matrix with ``stay`` on the diagonal."""
    if K == 1:
        return np.ones((1, 1))
    off = (1.0 - stay) / (K - 1)
    return np.full((K, K), off) + np.eye(K) * (stay - off)


@dataclass(frozen=True, eq=False)
class DdcsbmConfig:
    """Parameters of the block model generator.

    ``pair_rate_factor`` multiplies every unordered pair's Poisson rate;
    1.0 draws each pair once at rate theta_i theta_j a_scale omega.  The
    scenario catalog raises it to model both directions of communication
    contributing to an undirected weight (see the catalog data file).
    """

    n: int
    T: int
    K: int = 3
    phi: float = 0.5
    delta: float = 0.98
    pi: np.ndarray | None = None
    omega: np.ndarray | None = None
    a_scale: float = 1.0
    pair_rate_factor: float = 1.0
    edge_kind: EdgeKind = EdgeKind.COUNT
    binarize_threshold: int = 1
    rescale_mode: RescaleMode = RescaleMode.MEAN
    t1: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.T < 2:
            raise ValueError("T must be >= 2")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if not abs(self.phi) < 1:
            raise ValueError("|phi| must be < 1")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.pi is None:
            object.__setattr__(self, "pi", default_transition_matrix(self.K))
        else:
            pi = np.asarray(self.pi, dtype=float)
            if pi.shape != (self.K, self.K):
                raise ValueError("pi must be K x K")
            if (pi < 0).any():
                raise ValueError("pi entries must be nonnegative")
            if np.abs(pi.sum(axis=1) - 1.0).max() > 1e-9:
                raise ValueError("pi rows must sum to 1")
            object.__setattr__(self, "pi", pi)
        if self.omega is None:
            if self.K != 3:
                raise ValueError("omega default is defined for K=3; pass omega")
            object.__setattr__(self, "omega", DEFAULT_OMEGA.copy())
        else:
            omega = np.asarray(self.omega, dtype=float)
            if omega.shape != (self.K, self.K):
                raise ValueError("omega must be K x K")
            if not np.allclose(omega, omega.T):
                raise ValueError("omega must be symmetric")
            if ((omega <= 0) | (omega >= 1)).any():
                raise ValueError("omega entries must lie in (0, 1)")
            diag = np.diag(omega)
            if len(np.unique(diag)) != self.K:
                raise ValueError("omega diagonal entries must be pairwise distinct")
            object.__setattr__(self, "omega", omega)
        if self.a_scale <= 0:
            raise ValueError("a_scale must be positive")
        if self.pair_rate_factor <= 0:
            raise ValueError("pair_rate_factor must be positive")
        if self.binarize_threshold < 1:
            raise ValueError("binarize_threshold must be >= 1")
        if self.t1 is not None and not 1 <= self.t1 < self.T:
            raise ValueError("t1 must satisfy 1 <= t1 < T")

    @property
    def resolved_t1(self) -> int:
        return self.t1 if self.t1 is not None else self.T // 2


def generate_communities(cfg: DdcsbmConfig) -> np.ndarray:
    """Draw the (T, n) community-label chain (labels 0..K-1).

    Initial labels are uniform; each node then transitions independently
    according to the row of pi for its current community.  The initial
    assignment is the t = 1 assignment.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(cfg.seed, spawn_key=(_COMMUNITY_STREAM,))
    )
    z = np.empty((cfg.T, cfg.n), dtype=np.int64)
    z[0] = rng.integers(0, cfg.K, size=cfg.n)
    cum = np.cumsum(cfg.pi, axis=1)
    for t0 in range(1, cfg.T):
        u = rng.random(cfg.n)
        z[t0] = (u[:, None] > cum[z[t0 - 1]]).sum(axis=1)
    return z


def generate_propensities(cfg: DdcsbmConfig) -> np.ndarray:
    """Draw the (T, n) propensity field, entries in [1-delta, 1+delta].

    Each node draws an anchor theta*_0 ~ U(-1, 1); at every time
    theta*_t = phi * theta*_0 + (1 - phi) * U(-1, 1), so the series stays
    near its anchor as |phi| -> 1 instead of reverting to the global mean.
    Propensities are theta = delta * theta* + 1.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(cfg.seed, spawn_key=(_PROPENSITY_STREAM,))
    )
    anchor = rng.uniform(-1.0, 1.0, size=cfg.n)
    eps = rng.uniform(-1.0, 1.0, size=(cfg.T, cfg.n))
    theta_star = cfg.phi * anchor[None, :] + (1.0 - cfg.phi) * eps
    return cfg.delta * theta_star + 1.0


def rescale_propensities(
    theta_t: np.ndarray,
    z_t: np.ndarray,
    K: int,
    mode: RescaleMode = RescaleMode.MEAN,
) -> np.ndarray:
    """Rescale one time slice of propensities within each community.

    MEAN mode divides by the community average so rescaled values have
    mean exactly 1 per community; SUM mode divides by the community total
    (kept for auditability, it shrinks rates by the community size).
    """
    sums = np.bincount(z_t, weights=theta_t, minlength=K)
    counts = np.bincount(z_t, minlength=K)
    occupied = counts > 0
    denom = sums.copy()
    if mode == RescaleMode.MEAN:
        denom[occupied] = sums[occupied] / counts[occupied]
    denom[~occupied] = 1.0
    return theta_t / denom[z_t]


def generate(cfg: DdcsbmConfig, anomaly: AnomalySpec | None = None) -> DynamicNetwork:
    """Generate an undirected dynamic network from the block model.

    Each unordered pair draws one Poisson count at rate
    pair_rate_factor * a_scale * omega[z_i, z_j] * theta_i * theta_j;
    binary networks threshold the same counts at ``binarize_threshold``,
    so with equal seeds the binary output is the indicator of the count
    output.  Snapshots consume independent per-time substreams, so
    snapshots outside an anomaly window are bit-identical with and
    without the anomaly.
    """
    t1 = cfg.resolved_t1
    if anomaly is not None:
        anomaly.validate_for(cfg.n, t1, cfg.T)
    z = generate_communities(cfg)
    theta = generate_propensities(cfg)
    affected = np.asarray(anomaly.affected_nodes, dtype=int) if anomaly else None
    iu = np.triu_indices(cfg.n, k=1)
    weights = np.zeros((cfg.T, cfg.n, cfg.n), dtype=np.int64)
    for t0 in range(cfg.T):
        t = t0 + 1
        th = theta[t0]
        if (
            anomaly is not None
            and anomaly.family == AnomalyFamily.DEGREE_PARAM
            and anomaly.in_window(t)
        ):
            th = th.copy()
            th[affected] *= effective_magnitude(anomaly, t, baseline=1.0)
        th = rescale_propensities(th, z[t0], cfg.K, cfg.rescale_mode)
        rate = (
            cfg.pair_rate_factor
            * cfg.a_scale
            * cfg.omega[z[t0][:, None], z[t0][None, :]]
            * th[:, None]
            * th[None, :]
        )
        if (
            anomaly is not None
            and anomaly.family == AnomalyFamily.ODDS_RATIO
            and anomaly.in_window(t)
        ):
            block = np.ix_(affected, affected)
            rate[block] *= effective_or(anomaly, t)
        rng_t = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(_EDGE_STREAM, t0))
        )
        counts = rng_t.poisson(rate[iu])
        w = weights[t0]
        w[iu] = counts
        w += w.T
    if cfg.edge_kind == EdgeKind.BINARY:
        weights = (weights >= cfg.binarize_threshold).astype(np.int64)
    return DynamicNetwork(
        weights=weights, directed=False, edge_kind=cfg.edge_kind, t1=t1
    )
