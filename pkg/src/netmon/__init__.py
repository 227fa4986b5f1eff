"""netmon: simulate, perturb, and monitor temporally-evolving networks.

Generates correlated dynamic networks from two latent-variable models,
injects parameter-level anomalies, monitors model-free summary statistics
with control charts and a scan threshold, and evaluates detection
performance over Monte Carlo replicates.
"""
from .anomaly import (
    AnomalyFamily,
    AnomalyProfile,
    AnomalySpec,
    effective_magnitude,
    effective_or,
    odds_ratio_scale_bernoulli,
    odds_ratio_scale_poisson,
)
from .ddcsbm import DdcsbmConfig, RescaleMode
from .ddcsbm import generate as generate_ddcsbm
from .dlsm import DlsmConfig, PriorMode, eta
from .dlsm import generate as generate_dlsm
from .dlsm import generate_latent_positions
from .evaluate import (
    EvalRecord,
    aggregate,
    detection_rate,
    false_alarm_rate,
    roc_auc,
)
from .monitor import (
    ChartState,
    SigmaEstimator,
    SignalStream,
    calibrate_q,
    fit_chart,
    scan_monitor,
    shewhart_monitor,
    sigma_amr,
    sigma_corr,
    sigma_mmr,
)
from .network import (
    DynamicNetwork,
    EdgeKind,
    EdgeListError,
    Snapshot,
    read_edge_list,
    validate,
    write_edge_list,
)
from .scenario import Scenario, lookup_a_scale, run_scenario
from .stats import (
    ALL_STATS,
    SUMMARY_STATS,
    StatName,
    StatSeries,
    compute_all,
    compute_series,
    density,
    diff_stat,
    max_degree,
    neighborhood_size,
    scan_series,
    sum_stat,
)

__version__ = "0.1.0"
