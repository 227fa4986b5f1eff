"""Scoring of signal streams against planted anomaly windows.

Detection rate is the indicator that any alarm falls inside the window;
false alarm rate is the alarm fraction over scored times outside it.
ROC curves sweep the threshold multiplier q over [-6, 6] and report the
trapezoidal AUC with (0,0)/(1,1) anchors.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .monitor import SigmaEstimator, SignalStream, _phase2_exceed_scores
from .stats import StatName, StatSeries

__all__ = [
    "EvalRecord",
    "detection_rate",
    "false_alarm_rate",
    "roc_auc",
    "aggregate",
    "write_records_csv",
    "write_summary_csv",
    "ROC_Q_GRID",
]

ROC_Q_GRID = np.round(np.arange(-6.0, 6.0 + 1e-9, 0.05), 2)


@dataclass(frozen=True)
class EvalRecord:
    """Per-replicate, per-statistic outcome; dr/auc are None for null runs."""

    scenario_id: str
    replicate: int
    statistic: StatName
    dr: int | None
    auc: float | None
    far: float

    def __post_init__(self) -> None:
        if self.auc is not None and not 0.0 <= self.auc <= 1.0:
            raise ValueError("auc must lie in [0, 1]")
        if not 0.0 <= self.far <= 1.0:
            raise ValueError("far must lie in [0, 1]")


def _window_mask(times: np.ndarray, window: tuple[int, int]) -> np.ndarray:
    lo, hi = window
    if hi < lo:
        raise ValueError("empty anomaly window")
    return (times >= lo) & (times <= hi)


def detection_rate(stream: SignalStream, window: tuple[int, int]) -> int:
    """1 if any alarm falls inside the anomaly window, else 0.

    Alarms outside the window do not count as detections; they are false
    alarms.
    """
    mask = _window_mask(stream.times, window)
    if not mask.any():
        raise ValueError(f"window {window} outside scored times")
    return int(stream.signals[mask].any())


def false_alarm_rate(
    stream: SignalStream, window: tuple[int, int] | None = None
) -> float:
    """Alarm fraction over scored times outside the anomaly window."""
    if window is None:
        outside = np.ones(len(stream.times), dtype=bool)
    else:
        outside = ~_window_mask(stream.times, window)
    if not outside.any():
        raise ValueError("no scored times outside the window")
    return float(stream.signals[outside].mean())


def roc_auc(
    series: StatSeries,
    t1: int,
    window: tuple[int, int],
    estimator: SigmaEstimator = SigmaEstimator.CORR_SD,
    q_grid: np.ndarray = ROC_Q_GRID,
) -> float:
    """Area under the ROC curve swept over the threshold multiplier q.

    True labels are the times inside the anomaly window.  The sweep is
    one-sided upper for every statistic: a time is flagged when the value
    exceeds mu_hat + q sigma_hat (summary statistics, chart fit on the
    series' own Phase I) or q itself (scan).  Unlike live monitoring the
    sweep is not two-sided, so a statistic that drops under the anomaly
    scores below 0.5.  (FPR, TPR) points are anchored at (0,0) and (1,1),
    sorted, and integrated by trapezoid.
    """
    scores = _phase2_exceed_scores(series, t1, estimator)
    start = max(t1, series.first_defined - 1)
    times = np.arange(start + 1, series.n_times + 1)
    inside = _window_mask(times, window)
    if not inside.any():
        raise ValueError(f"window {window} outside scored region")
    if inside.all():
        raise ValueError("window covers every scored time")
    flagged = scores[None, :] > q_grid[:, None]
    tpr = flagged[:, inside].mean(axis=1)
    fpr = flagged[:, ~inside].mean(axis=1)
    fpr = np.concatenate([[0.0], fpr, [1.0]])
    tpr = np.concatenate([[0.0], tpr, [1.0]])
    order = np.lexsort((tpr, fpr))
    return float(np.trapezoid(tpr[order], fpr[order]))


def aggregate(records: Iterable[EvalRecord]) -> list[dict]:
    """Mean DR/AUC/FAR per (scenario, statistic) over replicates."""
    groups: dict[tuple[str, StatName], list[EvalRecord]] = {}
    for rec in records:
        groups.setdefault((rec.scenario_id, rec.statistic), []).append(rec)
    rows = []
    for (scenario_id, statistic), recs in sorted(
        groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
    ):
        drs = [r.dr for r in recs if r.dr is not None]
        aucs = [r.auc for r in recs if r.auc is not None]
        rows.append(
            {
                "scenario_id": scenario_id,
                "statistic": statistic.value,
                "mean_dr": float(np.mean(drs)) if drs else None,
                "mean_auc": float(np.mean(aucs)) if aucs else None,
                "mean_far": float(np.mean([r.far for r in recs])),
                "n_reps": len(recs),
            }
        )
    return rows


def write_records_csv(
    records: Iterable[EvalRecord], dest: Union[str, Path, IO[str]]
) -> None:
    """Long-format results: ``scenario_id,replicate,statistic,metric,value``."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_records_csv(records, fh)
        return
    writer = csv.writer(dest)
    writer.writerow(["scenario_id", "replicate", "statistic", "metric", "value"])
    for rec in records:
        base = [rec.scenario_id, rec.replicate, rec.statistic.value]
        if rec.dr is not None:
            writer.writerow(base + ["dr", rec.dr])
        if rec.auc is not None:
            writer.writerow(base + ["auc", repr(float(rec.auc))])
        writer.writerow(base + ["far", repr(float(rec.far))])


def write_summary_csv(rows: Iterable[dict], dest: Union[str, Path, IO[str]]) -> None:
    """Aggregated results, one row per (scenario, statistic)."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_summary_csv(rows, fh)
        return
    writer = csv.writer(dest)
    writer.writerow(["scenario_id", "statistic", "mean_dr", "mean_auc", "mean_far", "n_reps"])
    for row in rows:
        writer.writerow(
            [
                row["scenario_id"],
                row["statistic"],
                "" if row["mean_dr"] is None else repr(row["mean_dr"]),
                "" if row["mean_auc"] is None else repr(row["mean_auc"]),
                repr(row["mean_far"]),
                row["n_reps"],
            ]
        )
