from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netmon.ddcsbm import (
    DdcsbmConfig,
    RescaleMode,
    default_transition_matrix,
    generate,
    generate_communities,
    generate_propensities,
    rescale_propensities,
)
from netmon.network import EdgeKind


class TestConfig:
    def test_defaults(self):
        cfg = DdcsbmConfig(n=10, T=5)
        assert cfg.K == 3
        assert cfg.pi.shape == (3, 3)
        assert np.allclose(cfg.pi.sum(axis=1), 1.0)
        assert np.allclose(cfg.omega, cfg.omega.T)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"delta": 0.0},
            {"delta": 1.0},
            {"phi": 1.0},
            {"pi": np.array([[0.5, 0.4], [0.5, 0.5]]), "K": 2, "omega": np.array([[0.3, 0.1], [0.1, 0.4]])},
            {"omega": np.array([[0.5, 0.2, 0.2], [0.2, 0.5, 0.2], [0.2, 0.2, 0.5]])},
            {"binarize_threshold": 0},
            {"pair_rate_factor": 0.0},
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            DdcsbmConfig(n=10, T=5, **kwargs)

    def test_omega_default_requires_three_communities(self):
        with pytest.raises(ValueError, match="omega"):
            DdcsbmConfig(n=10, T=5, K=2, pi=default_transition_matrix(2))


class TestCommunities:
    def test_identity_transitions_freeze_labels(self):
        cfg = DdcsbmConfig(n=20, T=30, pi=np.eye(3), seed=1)
        z = generate_communities(cfg)
        assert (z == z[0]).all()

    def test_default_transition_switch_rate(self):
        cfg = DdcsbmConfig(n=100, T=100, seed=2)
        z = generate_communities(cfg)
        switches = (z[1:] != z[:-1]).mean()
        assert switches == pytest.approx(0.04, abs=0.01)

    def test_single_community(self):
        cfg = DdcsbmConfig(
            n=10, T=10, K=1, pi=np.ones((1, 1)), omega=np.array([[0.7]]), seed=3
        )
        assert (generate_communities(cfg) == 0).all()

    def test_labels_in_range(self):
        cfg = DdcsbmConfig(n=50, T=20, seed=4)
        z = generate_communities(cfg)
        assert z.min() >= 0 and z.max() < 3


class TestPropensities:
    def test_bounds_and_shape(self):
        cfg = DdcsbmConfig(n=40, T=60, phi=0.5, delta=0.98, seed=5)
        theta = generate_propensities(cfg)
        assert theta.shape == (60, 40)
        assert (theta >= 1 - 0.98 - 1e-12).all() and (theta <= 1 + 0.98 + 1e-12).all()

    def test_high_phi_stays_near_anchor(self):
        phi, delta = 0.999, 0.98
        cfg = DdcsbmConfig(n=30, T=200, phi=phi, delta=delta, seed=6)
        theta = generate_propensities(cfg)
        # |theta_t - theta_s| = delta*(1-phi)*|eps_t - eps_s| <= 2*delta*(1-phi)
        spread = theta.max(axis=0) - theta.min(axis=0)
        assert (spread <= 2 * delta * (1 - phi) + 1e-12).all()

    def test_phi_zero_is_iid_uniform(self):
        cfg = DdcsbmConfig(n=100, T=100, phi=0.0, delta=0.98, seed=7)
        theta = generate_propensities(cfg)
        assert theta.mean() == pytest.approx(1.0, abs=0.02)

    def test_anchor_transform_value(self):
        # delta * theta*_0 + 1 at theta*_0 = -0.75, delta = 0.98
        assert 0.98 * (-0.75) + 1 == pytest.approx(0.265)


class TestRescale:
    def test_equal_values_rescale_to_one(self):
        theta = np.full(6, 0.4)
        z = np.zeros(6, dtype=int)
        assert np.allclose(rescale_propensities(theta, z, 1), 1.0)

    def test_mean_one_community_untouched(self):
        theta = np.array([0.5, 1.5])
        z = np.zeros(2, dtype=int)
        assert np.allclose(rescale_propensities(theta, z, 1), [0.5, 1.5])

    def test_hand_values(self):
        theta = np.array([0.5, 0.5, 2.0, 1.0, 2.0])
        z = np.array([0, 0, 0, 1, 1])
        out = rescale_propensities(theta, z, 2)
        assert np.allclose(out[:3], [0.5, 0.5, 2.0])
        assert np.allclose(out[3:], [2 / 3, 4 / 3])

    def test_sum_mode(self):
        theta = np.array([1.0, 3.0])
        z = np.zeros(2, dtype=int)
        out = rescale_propensities(theta, z, 1, RescaleMode.SUM)
        assert np.allclose(out, [0.25, 0.75])

    @settings(max_examples=1000, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_per_community_mean_is_exactly_one(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 40))
        K = int(rng.integers(1, 5))
        z = rng.integers(0, K, size=n)
        theta = rng.uniform(0.02, 1.98, size=n)
        out = rescale_propensities(theta, z, K)
        for k in range(K):
            members = z == k
            if members.any():
                assert out[members].mean() == pytest.approx(1.0, abs=1e-12)


def _uniform_count_config(**overrides):
    # single community, near-constant propensities: every pair has rate ~0.7
    defaults = dict(
        n=50,
        T=200,
        K=1,
        phi=0.5,
        delta=1e-9,
        pi=np.ones((1, 1)),
        omega=np.array([[0.7]]),
        a_scale=1.0,
        edge_kind=EdgeKind.COUNT,
        seed=8,
    )
    defaults.update(overrides)
    return DdcsbmConfig(**defaults)


class TestGenerate:
    def test_count_mean_matches_rate(self):
        net = generate(_uniform_count_config())
        iu = np.triu_indices(50, 1)
        mean_weight = np.stack([w[iu] for w in net.weights]).mean()
        assert mean_weight == pytest.approx(0.7, abs=0.02)

    def test_binary_matches_poisson_tail(self):
        net = generate(_uniform_count_config(edge_kind=EdgeKind.BINARY))
        iu = np.triu_indices(50, 1)
        freq = np.stack([w[iu] for w in net.weights]).mean()
        assert freq == pytest.approx(1 - np.exp(-0.7), abs=0.02)

    def test_pair_rate_factor_scales_mean(self):
        net = generate(_uniform_count_config(pair_rate_factor=2.0))
        iu = np.triu_indices(50, 1)
        mean_weight = np.stack([w[iu] for w in net.weights]).mean()
        assert mean_weight == pytest.approx(1.4, abs=0.03)

    def test_binary_is_indicator_of_count(self):
        count = generate(_uniform_count_config(seed=12))
        binary = generate(_uniform_count_config(seed=12, edge_kind=EdgeKind.BINARY))
        assert np.array_equal(binary.weights, (count.weights >= 1).astype(np.int64))

    def test_binarize_threshold(self):
        count = generate(_uniform_count_config(seed=13, a_scale=3.0))
        b2 = generate(
            _uniform_count_config(seed=13, a_scale=3.0, edge_kind=EdgeKind.BINARY, binarize_threshold=2)
        )
        assert np.array_equal(b2.weights, (count.weights >= 2).astype(np.int64))

    def test_symmetry_and_zero_diagonal(self):
        cfg = DdcsbmConfig(n=30, T=10, a_scale=0.16, edge_kind=EdgeKind.BINARY, seed=9)
        net = generate(cfg)
        assert not net.directed
        assert (net.weights == np.swapaxes(net.weights, 1, 2)).all()
        assert (np.diagonal(net.weights, axis1=1, axis2=2) == 0).all()

    def test_determinism(self):
        cfg = DdcsbmConfig(n=25, T=12, a_scale=0.16, seed=21)
        assert generate(cfg) == generate(cfg)
