"""Parameter-level anomaly injection for the network generators.

Two families: odds-ratio shifts of edge probabilities/rates on a node
subset, and degree-parameter shifts (latent radii for the latent space
model, propensity multipliers for the block model).  Each family supports
a sustained profile (constant at the target magnitude) and a gradual
profile (linear ramp reaching the target at the final anomalous step).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "AnomalyFamily",
    "AnomalyProfile",
    "AnomalySpec",
    "effective_magnitude",
    "effective_or",
    "odds_ratio_scale_bernoulli",
    "odds_ratio_scale_poisson",
]


class AnomalyFamily(str, Enum):
    ODDS_RATIO = "odds_ratio"
    DEGREE_PARAM = "degree_param"


class AnomalyProfile(str, Enum):
    SUSTAINED = "sustained"
    GRADUAL = "gradual"


@dataclass(frozen=True)
class AnomalySpec:
    """Description of one planted anomaly.

    ``affected_nodes`` are 0-based node indices.  The anomalous window is
    ``t_start .. t_start + cpl - 1`` inclusive (1-based times) and must lie
    in Phase II.  ``magnitude`` is the target odds ratio (odds-ratio
    family) or the target parameter value/multiplier (degree family:
    new radius for the latent space model, propensity multiplier for the
    block model).
    """

    family: AnomalyFamily
    profile: AnomalyProfile
    affected_nodes: tuple[int, ...]
    t_start: int = 61
    cpl: int = 10
    magnitude: float = 2.0

    def __post_init__(self) -> None:
        nodes = tuple(sorted(set(int(i) for i in self.affected_nodes)))
        object.__setattr__(self, "affected_nodes", nodes)
        if self.cpl < 1:
            raise ValueError("cpl must be >= 1")
        if self.magnitude <= 0:
            raise ValueError("magnitude must be positive")

    @property
    def t_end(self) -> int:
        """Last anomalous time, inclusive."""
        return self.t_start + self.cpl - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.t_start, self.t_end)

    def in_window(self, t: int) -> bool:
        return self.t_start <= t <= self.t_end

    def validate_for(self, n: int, t1: int, T: int) -> None:
        """Check this anomaly against a generator's dimensions; raise on misfit."""
        if self.affected_nodes and not (
            0 <= self.affected_nodes[0] and self.affected_nodes[-1] < n
        ):
            raise ValueError(f"affected node outside 0..{n - 1}")
        if self.t_start <= t1:
            raise ValueError(f"t_start={self.t_start} must lie in Phase II (t > {t1})")
        if self.t_end > T:
            raise ValueError(f"anomaly window ends at {self.t_end} > T={T}")

    @staticmethod
    def first_nodes(n_affected: int) -> tuple[int, ...]:
        """Deterministic affected set: the first ``n_affected`` node indices."""
        return tuple(range(n_affected))


def effective_magnitude(spec: AnomalySpec, t: int, baseline: float = 1.0) -> float:
    """Anomaly parameter value at time t.

    Outside the window this is ``baseline`` (no effect).  Sustained
    profiles jump to ``spec.magnitude`` for the whole window; gradual
    profiles ramp linearly from ``baseline``, reaching the magnitude at
    the final anomalous step.
    """
    if not spec.in_window(t):
        return baseline
    if spec.profile == AnomalyProfile.SUSTAINED:
        return spec.magnitude
    s = t - spec.t_start + 1
    return baseline + (spec.magnitude - baseline) * (s / spec.cpl)


def effective_or(spec: AnomalySpec, t: int) -> float:
    """Odds ratio in force at time t (1.0 outside the window)."""
    return effective_magnitude(spec, t, baseline=1.0)


def odds_ratio_scale_bernoulli(p0, or_val):
    """Scale Bernoulli probabilities so that odds(p1)/odds(p0) = or_val.

    Uses p1 = C * p0 with C = OR / (1 - p0 + OR * p0); p0 in {0, 1} are
    fixed points.  Accepts scalars or arrays.
    """
    p0 = np.asarray(p0, dtype=float)
    scale = or_val / (1.0 - p0 + or_val * p0)
    return scale * p0


def odds_ratio_scale_poisson(rate, or_val):
    """Scale Poisson rates multiplicatively by the odds ratio."""
    return np.asarray(rate, dtype=float) * or_val
