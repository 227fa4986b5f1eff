from __future__ import annotations

import pytest

from netmon.anomaly import AnomalyFamily, AnomalyProfile, AnomalySpec
from netmon.ddcsbm import DdcsbmConfig
from netmon.dlsm import DlsmConfig
from netmon.network import EdgeKind
from netmon.scenario import (
    CatalogError,
    Scenario,
    ScenarioError,
    calibration_table,
    catalog_cells,
    generate_network,
    generator_config,
    load_scenarios,
    lookup_a_scale,
    run_scenario,
    scenario_from_dict,
)
from netmon.stats import ALL_STATS, StatName


class TestCatalog:
    def test_tabulated_values(self):
        assert lookup_a_scale("dlsm", EdgeKind.BINARY, 0.21) == pytest.approx(0.0002)
        assert lookup_a_scale("ddcsbm", EdgeKind.BINARY, 0.03) == pytest.approx(0.045)
        assert lookup_a_scale("ddcsbm", EdgeKind.COUNT, 0.11) == pytest.approx(0.17)

    def test_missing_cell_is_an_error(self):
        with pytest.raises(CatalogError):
            lookup_a_scale("dlsm", EdgeKind.BINARY, 0.5)
        with pytest.raises(CatalogError):
            lookup_a_scale("nope", EdgeKind.BINARY, 0.11)

    def test_cells_cover_the_sweep(self):
        for model in ("dlsm", "ddcsbm"):
            for kind in EdgeKind:
                cells = catalog_cells(model, kind)
                for target in (0.03, 0.06, 0.09, 0.11, 0.12, 0.15, 0.18, 0.21):
                    assert target in cells

    def test_generator_config_applies_calibration(self):
        sc = Scenario(id="x", model="dlsm", edge_kind=EdgeKind.BINARY, phi=0.5)
        cfg = generator_config(sc, seed=1)
        assert isinstance(cfg, DlsmConfig)
        assert cfg.sigma2 == pytest.approx(0.65 * 0.75)
        sc = Scenario(id="x", model="ddcsbm", edge_kind=EdgeKind.COUNT, phi=0.5)
        cfg = generator_config(sc, seed=1)
        assert isinstance(cfg, DdcsbmConfig)
        assert cfg.pair_rate_factor == pytest.approx(1.86)
        assert cfg.a_scale == pytest.approx(0.17)


def tiny_scenario(anomaly=True, **overrides) -> Scenario:
    spec = None
    if anomaly:
        spec = AnomalySpec(
            family=AnomalyFamily.ODDS_RATIO,
            profile=AnomalyProfile.SUSTAINED,
            affected_nodes=AnomalySpec.first_nodes(6),
            t_start=30,
            cpl=5,
            magnitude=4.0,
        )
    params = dict(
        id="tiny",
        model="ddcsbm",
        edge_kind=EdgeKind.BINARY,
        n=20,
        T=46,
        t1=20,
        m=5,
        reps=2,
        calib_reps=2,
        base_seed=77,
        anomaly=spec,
    )
    params.update(overrides)
    return Scenario(**params)


class TestRunner:
    def test_run_produces_full_record_grid(self):
        result = run_scenario(tiny_scenario())
        assert not result.errors
        assert len(result.records) == 2 * len(ALL_STATS)
        assert {r.statistic for r in result.records} == set(ALL_STATS)
        for rec in result.records:
            assert rec.dr in (0, 1)
            assert 0.0 <= rec.auc <= 1.0

    def test_run_is_deterministic(self):
        a = run_scenario(tiny_scenario())
        b = run_scenario(tiny_scenario())
        assert a.summary == b.summary
        assert a.calibration == b.calibration

    def test_run_independent_of_parallelism(self):
        a = run_scenario(tiny_scenario(), jobs=1)
        b = run_scenario(tiny_scenario(), jobs=2)
        assert a.summary == b.summary

    def test_null_scenario_reports_far_only(self):
        result = run_scenario(tiny_scenario(anomaly=False))
        assert all(r.dr is None and r.auc is None for r in result.records)
        rows = result.summary
        assert all(row["mean_dr"] is None for row in rows)
        assert all(0.0 <= row["mean_far"] <= 1.0 for row in rows)

    def test_precomputed_calibration_is_reused(self):
        sc = tiny_scenario()
        qmap = {stat: 1.5 for stat in ALL_STATS}
        result = run_scenario(sc, calibration=qmap)
        assert result.calibration == qmap

    def test_calibration_table_reports_far(self):
        qmap, rows = calibration_table(tiny_scenario(anomaly=False))
        assert set(qmap) == set(ALL_STATS)
        for row in rows:
            assert 0.0 <= row["far"] <= 1.0
            assert 0.0 <= row["q"] <= 6.0

    def test_evaluation_seeds_differ_from_calibration_seeds(self):
        sc = tiny_scenario()
        eval_net = generate_network(sc, sc.base_seed + 0, with_anomaly=False)
        calib_net = generate_network(sc, sc.base_seed + sc.reps + 0, with_anomaly=False)
        assert eval_net != calib_net


class TestScenarioParsing:
    def test_from_dict_minimal(self):
        sc = scenario_from_dict({"id": "a", "model": "dlsm", "kind": "binary"})
        assert sc.reps == 200 and sc.phi == 0.5 and sc.anomaly is None

    def test_from_dict_full(self):
        sc = scenario_from_dict(
            {
                "id": "a",
                "model": "ddcsbm",
                "kind": "count",
                "phi": 0.9,
                "density": 0.03,
                "reps": 7,
                "base_seed": 5,
                "statistics": ["density", "scan"],
                "anomaly": {
                    "family": "degree_param",
                    "profile": "gradual",
                    "n_affected": 20,
                    "t_start": 61,
                    "cpl": 20,
                    "magnitude": 5.0,
                },
            }
        )
        assert sc.anomaly.profile == AnomalyProfile.GRADUAL
        assert sc.statistics == (StatName.DENSITY, StatName.SCAN)

    @pytest.mark.parametrize(
        "doc",
        [
            {"model": "dlsm", "kind": "binary"},
            {"id": "a", "model": "martian", "kind": "binary"},
            {"id": "a", "model": "dlsm", "kind": "binary", "phi": 1.5},
            {"id": "a", "model": "dlsm", "kind": "binary", "anomaly": {"family": "nope", "magnitude": 2}},
            {"id": "a", "model": "dlsm", "kind": "binary", "anomaly": {"family": "odds_ratio", "n_affected": 3, "t_start": 10, "magnitude": 2}},
        ],
    )
    def test_bad_documents_rejected(self, doc):
        with pytest.raises((ScenarioError, ValueError)):
            scenario_from_dict(doc)

    def test_load_scenarios_rejects_duplicates(self, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text(
            "- {id: a, model: dlsm, kind: binary}\n- {id: a, model: dlsm, kind: count}\n"
        )
        with pytest.raises(ScenarioError, match="duplicate"):
            load_scenarios(path)

    def test_load_scenarios_round_trip(self, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text(
            """
- id: cell-a
  model: ddcsbm
  kind: binary
  phi: 0.5
  density: 0.11
  reps: 3
  anomaly:
    family: odds_ratio
    profile: sustained
    n_affected: 33
    t_start: 61
    cpl: 10
    magnitude: 2.5
"""
        )
        scenarios = load_scenarios(path)
        assert len(scenarios) == 1
        assert scenarios[0].anomaly.magnitude == 2.5
