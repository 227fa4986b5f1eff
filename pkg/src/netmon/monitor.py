"""Phase I baseline estimation, threshold monitoring, and q calibration.

Summary statistics are monitored with a Shewhart individuals chart whose
control limits are mu_hat +/- q * sigma_hat, with sigma_hat estimated by
one of three estimators (average moving range, median moving range, or an
autocorrelation-corrected standard deviation).  The scan statistic is
monitored one-sided against a raw threshold q.  The multiplier q is
calibrated empirically so the false alarm rate on anomaly-free data is as
close as possible to a target probability.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .stats import StatName, StatSeries

__all__ = [
    "SigmaEstimator",
    "ChartState",
    "SignalStream",
    "sigma_amr",
    "sigma_mmr",
    "sigma_corr",
    "autocorr_inflation",
    "estimate_sigma",
    "fit_chart",
    "shewhart_monitor",
    "scan_monitor",
    "calibrate_q",
    "far_curve",
    "DEFAULT_Q_GRID",
]

# Anti-biasing constants for moving-range estimators of sigma.
AMR_D2 = 1.13
MMR_FACTOR = 1.047

# Floor for the autocorrelation inflation factor; noisy long-lag sample
# autocorrelations can push it to zero or below, which would blow up s.
GAMMA1_FLOOR = 0.05

DEFAULT_Q_GRID = np.round(np.arange(0.0, 6.0 + 1e-9, 0.05), 2)


class SigmaEstimator(str, Enum):
    AMR = "amr"
    MMR = "mmr"
    CORR_SD = "corr_sd"


@dataclass(frozen=True)
class ChartState:
    """Fitted control chart: limits are mu_hat +/- q * sigma_hat."""

    mu_hat: float
    sigma_hat: float
    q: float
    two_sided: bool = True

    def __post_init__(self) -> None:
        if self.sigma_hat < 0:
            raise ValueError("sigma_hat must be nonnegative")


@dataclass(frozen=True, eq=False)
class SignalStream:
    """Alarm indicators over the scored times.

    ``times`` are 1-based; ``signals`` is the parallel 0/1 array.
    """

    times: np.ndarray
    signals: np.ndarray

    def as_dict(self) -> dict[int, int]:
        return {int(t): int(a) for t, a in zip(self.times, self.signals)}


def _moving_ranges(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need a 1-D series of length >= 2")
    return np.abs(np.diff(x))


def sigma_amr(x: Sequence[float]) -> float:
    """Average moving range divided by the anti-biasing constant 1.13."""
    return float(_moving_ranges(np.asarray(x)).mean() / AMR_D2)


def sigma_mmr(x: Sequence[float]) -> float:
    """Median moving range times 1.047."""
    return float(np.median(_moving_ranges(np.asarray(x))) * MMR_FACTOR)


def autocorr_inflation(x: np.ndarray) -> float:
    """Autocorrelation correction factor gamma_1 over all lags 1..len-1.

    Uses the biased (denominator-n) sample autocorrelation, which keeps
    the correction stable.  Not clamped here; see :func:`sigma_corr`.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 3:
        raise ValueError("need length >= 3")
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        return 1.0
    acf = np.array(
        [float(centered[: n - k] @ centered[k:]) / denom for k in range(1, n)]
    )
    lags = np.arange(1, n)
    return float(1.0 - (2.0 / (n - 1)) * np.sum((1.0 - lags / n) * acf))


def sigma_corr(x: Sequence[float]) -> float:
    """Autocorrelation-corrected standard deviation sqrt(s^2 / gamma_1).

    gamma_1 is clamped below at GAMMA1_FLOOR (with a warning) since noisy
    sample autocorrelations can make it nonpositive.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 3:
        raise ValueError("need length >= 3")
    s2 = float(x.var(ddof=1))
    if s2 == 0.0:
        return 0.0
    gamma1 = autocorr_inflation(x)
    if gamma1 <= GAMMA1_FLOOR:
        warnings.warn(
            f"gamma_1={gamma1:.4f} clamped to {GAMMA1_FLOOR}",
            RuntimeWarning,
            stacklevel=2,
        )
        gamma1 = GAMMA1_FLOOR
    return float(np.sqrt(s2 / gamma1))


_ESTIMATORS = {
    SigmaEstimator.AMR: sigma_amr,
    SigmaEstimator.MMR: sigma_mmr,
    SigmaEstimator.CORR_SD: sigma_corr,
}


def estimate_sigma(x: Sequence[float], estimator: SigmaEstimator) -> float:
    return _ESTIMATORS[SigmaEstimator(estimator)](x)


def _phase1_values(series: StatSeries, t1: int) -> np.ndarray:
    """Defined Phase I values of a series (times first_defined..t1)."""
    start = series.first_defined - 1
    if start >= t1:
        raise ValueError(
            f"series defined from t={series.first_defined} has no Phase I data (t1={t1})"
        )
    return series.values[start:t1]


def fit_chart(
    series: StatSeries,
    t1: int,
    estimator: SigmaEstimator = SigmaEstimator.CORR_SD,
    q: float = 3.0,
    two_sided: bool = True,
) -> ChartState:
    """Fit a Shewhart individuals chart on the Phase I part of a series."""
    phase1 = _phase1_values(series, t1)
    return ChartState(
        mu_hat=float(phase1.mean()),
        sigma_hat=estimate_sigma(phase1, estimator),
        q=q,
        two_sided=two_sided,
    )


def shewhart_monitor(series: StatSeries, chart: ChartState, t1: int) -> SignalStream:
    """Threshold rule over Phase II per the chart's sidedness.

    Two-sided charts alarm outside mu_hat +/- q sigma_hat; one-sided
    charts alarm only above the upper limit (the convention under which
    q is calibrated).  With sigma_hat = 0 the limits collapse to mu_hat.
    """
    values = series.values[t1:]
    times = np.arange(t1 + 1, series.n_times + 1)
    half_width = chart.q * chart.sigma_hat
    if chart.two_sided:
        exceeded = np.abs(values - chart.mu_hat) > half_width
    else:
        exceeded = values - chart.mu_hat > half_width
    return SignalStream(times=times, signals=exceeded.astype(np.int64))


def scan_monitor(series: StatSeries, q: float, t1: int) -> SignalStream:
    """One-sided threshold rule for scan series: alarm when value > q.

    Scoring starts after both Phase I and the scan start-up region,
    i.e. at t > max(t1, 2m).
    """
    if series.name != StatName.SCAN:
        raise ValueError("scan_monitor expects a scan series")
    start = max(t1, series.first_defined - 1)
    values = series.values[start:]
    times = np.arange(start + 1, series.n_times + 1)
    signals = (values > q).astype(np.int64)
    return SignalStream(times=times, signals=signals)


def _phase2_exceed_scores(series: StatSeries, t1: int, estimator: SigmaEstimator) -> np.ndarray:
    """Scores whose exceedance of q constitutes an upper-side false alarm.

    Summary statistics are standardized by their own Phase I chart:
    score = (x - mu_hat) / sigma_hat; scan series use raw values.
    A zero sigma_hat maps deviations to +/-inf.
    """
    if series.name == StatName.SCAN:
        start = max(t1, series.first_defined - 1)
        return series.values[start:]
    phase1 = _phase1_values(series, t1)
    mu = float(phase1.mean())
    sigma = estimate_sigma(phase1, estimator)
    values = series.values[t1:]
    if sigma == 0.0:
        return np.where(values > mu, np.inf, np.where(values < mu, -np.inf, 0.0))
    return (values - mu) / sigma


def far_curve(
    replicates: Iterable[StatSeries],
    t1: int,
    estimator: SigmaEstimator = SigmaEstimator.CORR_SD,
    q_grid: np.ndarray = DEFAULT_Q_GRID,
) -> np.ndarray:
    """Empirical upper-side false alarm rate at each grid q.

    Each replicate is an anomaly-free series; its chart is built from its
    own Phase I.  The curve is the mean over replicates of the fraction of
    scored times exceeding mu_hat + q sigma_hat (or q itself for scan).
    """
    rates = []
    for series in replicates:
        scores = _phase2_exceed_scores(series, t1, estimator)
        rates.append((scores[None, :] > q_grid[:, None]).mean(axis=1))
    if not rates:
        raise ValueError("need at least one replicate")
    return np.mean(rates, axis=0)


def calibrate_q(
    replicates: Sequence[StatSeries],
    t1: int,
    estimator: SigmaEstimator = SigmaEstimator.CORR_SD,
    p_target: float = 0.03,
    q_grid: np.ndarray = DEFAULT_Q_GRID,
) -> float:
    """Pick the grid q whose empirical false alarm rate is closest to target.

    Ties break toward the larger q.  The false alarm rate is nonincreasing
    in q, so the result is the chart multiplier (summary statistics) or
    raw threshold (scan) matching the target rate.
    """
    if not 0 < p_target < 1:
        raise ValueError("p_target must lie in (0, 1)")
    curve = far_curve(replicates, t1, estimator, q_grid)
    return _closest_q(curve, p_target, q_grid)


def _closest_q(curve: np.ndarray, p_target: float, q_grid: np.ndarray) -> float:
    err = np.abs(curve - p_target)
    best = len(err) - 1 - int(np.argmin(err[::-1]))
    return float(q_grid[best])


def calibrate_q_phase1(
    series: StatSeries,
    t1: int,
    estimator: SigmaEstimator = SigmaEstimator.CORR_SD,
    p_target: float = 0.03,
    q_grid: np.ndarray = DEFAULT_Q_GRID,
) -> float:
    """Calibrate q from a single network's own Phase I data.

    Fallback for monitoring real data, where no null replicates exist:
    the exceedance rate is measured on the Phase I values themselves.
    """
    phase1 = _phase1_values(series, t1)
    if series.name == StatName.SCAN:
        scores = phase1
    else:
        mu = float(phase1.mean())
        sigma = estimate_sigma(phase1, estimator)
        if sigma == 0.0:
            scores = np.where(phase1 > mu, np.inf, np.where(phase1 < mu, -np.inf, 0.0))
        else:
            scores = (phase1 - mu) / sigma
    curve = (scores[None, :] > q_grid[:, None]).mean(axis=1)
    return _closest_q(curve, p_target, q_grid)
