"""Dynamic latent space network generator.

Nodes carry 2-D latent positions evolving as an AR(1) process toward the
origin (|phi| < 1), or as the drifting random walk kept for comparison;
edge log-odds decay with pairwise distance relative to per-node
communication radii.  Binary networks draw Bernoulli(logistic(eta)),
count networks draw Poisson(exp(eta)), independently per ordered pair,
so the output is directed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from .anomaly import (
    AnomalyFamily,
    AnomalySpec,
    effective_magnitude,
    effective_or,
    odds_ratio_scale_bernoulli,
)
from .network import DynamicNetwork, EdgeKind

__all__ = ["PriorMode", "DlsmConfig", "generate_latent_positions", "eta", "generate"]

# Poisson rates are clamped at exp(RATE_CLAMP) to keep pathological
# configurations finite; a warning reports how many entries were clamped.
RATE_CLAMP = 10.0

_LATENT_STREAM = 0
_EDGE_STREAM = 1


class PriorMode(str, Enum):
    VAR1 = "var1"
    RANDOM_WALK = "random_walk"


@dataclass(frozen=True, eq=False)
class DlsmConfig:
    """Parameters of the latent space generator.

    ``sigma2`` is the per-coordinate innovation variance before scaling by
    ``a_scale``; the default 1 - phi**2 makes the stationary latent
    variance equal a_scale itself, independent of phi.  ``radii`` must be
    positive and sum to 1 (default: 1/n each).
    """

    n: int
    T: int
    phi: float = 0.5
    sigma2: float | None = None
    a_scale: float = 1.0
    beta_in: float = 1.0
    beta_out: float = 2.0
    radii: np.ndarray | None = None
    n_clusters: int = 5
    edge_kind: EdgeKind = EdgeKind.BINARY
    prior_mode: PriorMode = PriorMode.VAR1
    t1: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.T < 2:
            raise ValueError("T must be >= 2")
        if not abs(self.phi) < 1:
            raise ValueError("|phi| must be < 1")
        if self.sigma2 is None:
            object.__setattr__(self, "sigma2", 1.0 - self.phi**2)
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")
        if self.a_scale <= 0:
            raise ValueError("a_scale must be positive")
        if self.radii is None:
            object.__setattr__(self, "radii", np.full(self.n, 1.0 / self.n))
        else:
            radii = np.asarray(self.radii, dtype=float)
            if radii.shape != (self.n,):
                raise ValueError("radii must have length n")
            if (radii <= 0).any():
                raise ValueError("radii must be positive")
            if abs(radii.sum() - 1.0) > 1e-9:
                raise ValueError("radii must sum to 1")
            object.__setattr__(self, "radii", radii)
        if self.n_clusters < 1:
            raise ValueError("n_clusters must be >= 1")
        if self.t1 is not None and not 1 <= self.t1 < self.T:
            raise ValueError("t1 must satisfy 1 <= t1 < T")

    @property
    def resolved_t1(self) -> int:
        return self.t1 if self.t1 is not None else self.T // 2

    @property
    def innovation_var(self) -> float:
        return self.a_scale * float(self.sigma2)


def generate_latent_positions(cfg: DlsmConfig) -> np.ndarray:
    """Draw the (T, n, 2) latent trajectory.

    Cluster means are N(0, (2/n)^2 I); node i starts at
    N(mean of its cluster, a_scale * sigma2 * I) with clusters assigned
    round robin.  VAR(1) mode recurses X_t = phi X_{t-1} + noise and runs
    an extra T burn-in steps, keeping the last T draws so the kept block
    is stationary.  Random-walk mode keeps the first T draws unchanged,
    so the spread grows over time.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(cfg.seed, spawn_key=(_LATENT_STREAM,))
    )
    sd = np.sqrt(cfg.innovation_var)
    means = rng.normal(0.0, 2.0 / cfg.n, size=(cfg.n_clusters, 2))
    labels = np.arange(cfg.n) % cfg.n_clusters
    x = means[labels] + rng.normal(0.0, sd, size=(cfg.n, 2))
    if cfg.prior_mode == PriorMode.VAR1:
        total = 2 * cfg.T
        keep_from = cfg.T
    else:
        total = cfg.T
        keep_from = 0
    out = np.empty((total, cfg.n, 2))
    out[0] = x
    for step in range(1, total):
        noise = rng.normal(0.0, sd, size=(cfg.n, 2))
        if cfg.prior_mode == PriorMode.VAR1:
            x = cfg.phi * x + noise
        else:
            x = x + noise
        out[step] = x
    return out[keep_from:]


def eta(d: float, r_i: float, r_j: float, beta_in: float, beta_out: float) -> float:
    """Edge log-odds for the ordered pair (i, j) at distance d.

    beta_in weighs closeness relative to the receiver radius r_j, beta_out
    relative to the sender radius r_i; eta is asymmetric when radii differ.
    """
    if r_i <= 0 or r_j <= 0:
        raise ValueError("radii must be positive")
    return beta_in * (1.0 - d / r_j) + beta_out * (1.0 - d / r_i)


def _eta_matrix(dists: np.ndarray, radii: np.ndarray, beta_in: float, beta_out: float) -> np.ndarray:
    return beta_in * (1.0 - dists / radii[None, :]) + beta_out * (
        1.0 - dists / radii[:, None]
    )


def generate(cfg: DlsmConfig, anomaly: AnomalySpec | None = None) -> DynamicNetwork:
    """Generate a directed dynamic network from the latent space model.

    Deterministic given (cfg, anomaly): the latent trajectory and each
    snapshot consume independent named substreams of cfg.seed, so
    snapshots outside an anomaly window are bit-identical with and
    without the anomaly.
    """
    t1 = cfg.resolved_t1
    if anomaly is not None:
        anomaly.validate_for(cfg.n, t1, cfg.T)
    positions = generate_latent_positions(cfg)
    diffs = positions[:, :, None, :] - positions[:, None, :, :]
    dists = np.sqrt((diffs**2).sum(axis=-1))
    affected = np.asarray(anomaly.affected_nodes, dtype=int) if anomaly else None
    weights = np.empty((cfg.T, cfg.n, cfg.n), dtype=np.int64)
    n_clamped = 0
    for t0 in range(cfg.T):
        t = t0 + 1
        radii = cfg.radii
        if (
            anomaly is not None
            and anomaly.family == AnomalyFamily.DEGREE_PARAM
            and anomaly.in_window(t)
        ):
            radii = radii.copy()
            for i in affected:
                radii[i] = effective_magnitude(anomaly, t, baseline=cfg.radii[i])
            # keep the model on its constraint surface (radii sum to 1):
            # inflating a few radii shrinks everyone else proportionally,
            # which moves expected degree without moving overall density
            radii = radii / radii.sum()
        eta_t = _eta_matrix(dists[t0], radii, cfg.beta_in, cfg.beta_out)
        rng_t = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(_EDGE_STREAM, t0))
        )
        if cfg.edge_kind == EdgeKind.BINARY:
            p = expit(eta_t)
            if (
                anomaly is not None
                and anomaly.family == AnomalyFamily.ODDS_RATIO
                and anomaly.in_window(t)
            ):
                block = np.ix_(affected, affected)
                p[block] = odds_ratio_scale_bernoulli(p[block], effective_or(anomaly, t))
            y = (rng_t.random((cfg.n, cfg.n)) < p).astype(np.int64)
        else:
            clipped = np.minimum(eta_t, RATE_CLAMP)
            n_clamped += int((eta_t > RATE_CLAMP).sum())
            lam = np.exp(clipped)
            if (
                anomaly is not None
                and anomaly.family == AnomalyFamily.ODDS_RATIO
                and anomaly.in_window(t)
            ):
                block = np.ix_(affected, affected)
                lam[block] *= effective_or(anomaly, t)
            np.fill_diagonal(lam, 0.0)
            y = rng_t.poisson(lam).astype(np.int64)
        np.fill_diagonal(y, 0)
        weights[t0] = y
    if n_clamped:
        warnings.warn(
            f"clamped {n_clamped} Poisson rates at exp({RATE_CLAMP})",
            RuntimeWarning,
            stacklevel=2,
        )
    return DynamicNetwork(weights=weights, directed=True, edge_kind=cfg.edge_kind, t1=t1)
