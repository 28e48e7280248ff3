import logging

import numpy as np
import pytest

from hbfsim.beamforming.codebook import (
    Codebooks,
    HybridWeights,
    build_codebooks,
    greedy_columns,
    matched_filter,
    omp_combiner,
    rf_objective,
    rf_select_max,
)
from hbfsim.channel.model import LinkGeometry, generate_channel
from hbfsim.core.base import DimensionError
from hbfsim.geometry.array import UraConfig, ura_responses


def orthonormal_columns(rng, rows, cols):
    q, _ = np.linalg.qr(rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))
    return q


def steering_codebook(rng, cfg, size):
    return ura_responses(cfg, rng.uniform(-60, 60, size), rng.uniform(-20, 20, size))


def test_single_ray_codebooks_have_one_column(single_ray_profile, small_tp, small_ue, rng):
    geometry = LinkGeometry(30.0, 30.0, 0.0, 0.0, 180.0, 0.0)
    link = generate_channel(small_tp, small_ue, geometry, single_ray_profile, rng)
    cb = build_codebooks(link, small_tp, small_ue)
    assert cb.A_T.shape == (small_tp.n_elements, 1)
    assert cb.A_R.shape == (small_ue.n_elements, 1)
    assert cb.size == 1


def test_rank_one_channel_selects_its_own_beams(rng, small_tp, small_ue):
    A_T = steering_codebook(rng, small_tp, 4)
    A_R = steering_codebook(rng, small_ue, 4)
    sigma = 3.0
    H = sigma * A_R[:, [1]] @ A_T[:, [2]].conj().T
    F_RF, W_RF = rf_select_max(H, Codebooks(A_T, A_R), 1, 1)
    assert np.allclose(F_RF[:, 0], A_T[:, 2])
    assert np.allclose(W_RF[:, 0], A_R[:, 1])
    assert rf_objective(H, F_RF, W_RF) == pytest.approx(sigma**2)


def test_single_chain_selection_is_exhaustive_optimum(rng, small_tp, small_ue):
    A_T = steering_codebook(rng, small_tp, 5)
    A_R = steering_codebook(rng, small_ue, 5)
    H = rng.standard_normal((small_ue.n_elements, small_tp.n_elements)) + 1j * rng.standard_normal(
        (small_ue.n_elements, small_tp.n_elements)
    )
    F_RF, W_RF = rf_select_max(H, Codebooks(A_T, A_R), 1, 1)
    best = max(abs(A_R[:, i].conj() @ H @ A_T[:, j]) ** 2 for i in range(5) for j in range(5))
    assert rf_objective(H, F_RF, W_RF) == pytest.approx(best)


def test_selection_uses_distinct_columns_and_unequal_chains(rng, small_tp, small_ue):
    A_T = steering_codebook(rng, small_tp, 6)
    A_R = steering_codebook(rng, small_ue, 6)
    H = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
    F_RF, W_RF = rf_select_max(H, Codebooks(A_T, A_R), 4, 2)
    assert F_RF.shape == (8, 4) and W_RF.shape == (4, 2)
    assert np.linalg.matrix_rank(F_RF) == 4


def test_small_codebook_reuses_columns_with_warning(rng, small_tp, small_ue, caplog):
    cb = Codebooks(steering_codebook(rng, small_tp, 1), steering_codebook(rng, small_ue, 1))
    H = rng.standard_normal((4, 8)) + 0j
    with caplog.at_level(logging.WARNING, logger="hbfsim.beamforming.codebook"):
        F_RF, W_RF = rf_select_max(H, cb, 2, 2)
    assert np.allclose(F_RF[:, 0], F_RF[:, 1])
    assert "reusing columns" in caplog.text


def test_empty_codebook_is_rejected():
    cb = Codebooks(np.zeros((8, 0), dtype=complex), np.zeros((4, 0), dtype=complex))
    with pytest.raises(DimensionError):
        rf_select_max(np.ones((4, 8)), cb, 1, 1)


def test_omp_recovers_combiner_in_codebook_span(rng):
    A_R = orthonormal_columns(rng, 8, 6)
    W_opt = A_R[:, [1, 4]] @ (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    W_RF, W_BB = omp_combiner(W_opt, A_R, 2)
    assert W_RF.shape == (8, 2) and W_BB.shape == (2, 2)
    assert np.allclose(W_RF @ W_BB, W_opt, atol=1e-10)


def test_omp_with_spare_chains_keeps_exact_fit(rng):
    A_R = orthonormal_columns(rng, 8, 6)
    W_opt = A_R[:, [2]]
    W_RF, W_BB = omp_combiner(W_opt, A_R, 3)
    assert W_RF.shape == (8, 3)
    assert np.allclose(W_RF @ W_BB, W_opt, atol=1e-10)


def test_hybrid_weights_power_scaling(rng):
    F_RF = orthonormal_columns(rng, 8, 4) * 2.0
    F_BB = rng.standard_normal((4, 2)) + 0j
    weights = HybridWeights.build(F_RF, F_BB, np.eye(4), np.eye(4)[:, :2])
    assert weights.eta == pytest.approx(np.linalg.norm(F_RF @ F_BB) ** 2)
    assert np.linalg.norm(weights.normalized_precoder(3.3)) ** 2 == pytest.approx(3.3)
    assert weights.n_streams == 2


def test_hybrid_weights_shape_checks():
    with pytest.raises(DimensionError):
        HybridWeights.build(np.eye(4), np.ones((3, 2)), np.eye(4), np.ones((4, 2)))
    with pytest.raises(DimensionError):
        HybridWeights.build(np.eye(2), np.zeros((2, 1)), np.eye(2), np.ones((2, 1)))


def test_matched_filter_has_unit_norm(rng):
    eff = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    W_BB = matched_filter(eff, np.eye(4)[:, :2])
    assert np.linalg.norm(W_BB) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        matched_filter(np.zeros((2, 2)), np.eye(2))


@pytest.mark.parametrize("role", ["transmit", "receive"])
def test_greedy_columns_names_the_reused_codebook(caplog, role):
    with caplog.at_level(logging.WARNING, logger="hbfsim.beamforming.codebook"):
        picks = greedy_columns(np.array([0.5, 2.0]), 3, role=role)
    assert picks == [1, 0, 1]
    assert f"2 {role} columns" in caplog.text
