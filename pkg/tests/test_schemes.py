from dataclasses import replace

import numpy as np
import pytest

from hbfsim.beamforming import SCHEME_HANDLERS, SCHEME_IDS, resolve_schemes
from hbfsim.beamforming.baseline import baseline_scheme
from hbfsim.beamforming.codebook import Codebooks, HybridWeights, effective_channel, matched_filter, rf_select_max
from hbfsim.beamforming.gmr import gmr_scheme
from hbfsim.beamforming.lsp import lsp_scheme, select_lsp_columns
from hbfsim.beamforming.slnr import slnr_ratio, slnr_scheme, stream_slnr
from hbfsim.beamforming.zf import zf_rank_check
from hbfsim.core.base import ConfigurationError, ConvergenceError, DimensionError
from hbfsim.harness.campaign import draw_drop
from hbfsim.metrics import LinkBudget, spectral_efficiency


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def orthonormal_columns(rng, rows, cols):
    q, _ = np.linalg.qr(random_complex(rng, rows, cols))
    return q


def projector(basis):
    q, _ = np.linalg.qr(basis)
    return q @ q.conj().T


# Scheme registry


def test_every_scheme_has_a_handler():
    assert set(SCHEME_IDS) == set(SCHEME_HANDLERS)


def test_resolve_schemes_parses_and_deduplicates():
    assert resolve_schemes("slnr, baseline,slnr") == ["slnr", "baseline"]
    assert resolve_schemes(["GMR"]) == ["gmr"]
    with pytest.raises(ConfigurationError):
        resolve_schemes("baseline,zf")


# Baseline


def test_baseline_on_diagonal_channel_picks_leading_axes():
    F_BB, W_BB = baseline_scheme(np.diag([3.0, 2.0, 1.0]), 2)
    assert np.allclose(np.abs(F_BB), np.eye(3)[:, :2])
    assert np.allclose(np.abs(W_BB), np.eye(3)[:, :2])


def test_baseline_full_rank_precoder_is_unitary(rng):
    F_BB, _ = baseline_scheme(random_complex(rng, 4, 4), 4)
    assert np.allclose(F_BB.conj().T @ F_BB, np.eye(4))


def test_baseline_interference_free_rate_matches_eigenmodes(rng, make_link):
    H = 1e-6 * random_complex(rng, 4, 4)
    budget = LinkBudget(transmit_power=30.0)
    F_BB, W_BB = baseline_scheme(H, 2)
    weights = {0: HybridWeights.build(np.eye(4), F_BB, np.eye(4), W_BB)}
    channels = {(0, 0): make_link(H)}
    se = spectral_efficiency(0, weights, channels, np.zeros((4, 4)), budget, [0])

    s = np.linalg.svd(H, compute_uv=False)
    snr = budget.tx_power_w / (2.0 * budget.noise_w)
    assert se == pytest.approx(sum(np.log2(1.0 + snr * s[j] ** 2) for j in range(2)), rel=1e-9)


def test_baseline_rejects_too_many_streams(rng):
    with pytest.raises(DimensionError):
        baseline_scheme(random_complex(rng, 2, 4), 3)


# LSP


def test_lsp_first_column_has_zero_leakage(rng, make_link):
    A_T = orthonormal_columns(rng, 8, 4)
    A_R = orthonormal_columns(rng, 4, 4)
    desired = make_link(random_complex(rng, 4, 8))
    # rows orthogonal to codebook column 3
    other = make_link(random_complex(rng, 4, 3) @ A_T[:, :3].conj().T)
    cb = Codebooks(A_T, A_R)
    assert select_lsp_columns(desired, [other], cb, 3)[0] == 3
    weights = lsp_scheme(desired, [other], cb, 2, (3, 2))
    assert np.allclose(weights.F_RF[:, 0], A_T[:, 3])
    assert np.linalg.norm(other.H @ weights.F_RF[:, 0]) < 1e-10


def test_lsp_without_leakage_maximizes_signal(rng, make_link):
    A_T = orthonormal_columns(rng, 8, 5)
    desired = make_link(random_complex(rng, 4, 8))
    cb = Codebooks(A_T, orthonormal_columns(rng, 4, 4))
    signal = np.sum(np.abs(desired.H @ A_T) ** 2, axis=0)
    assert select_lsp_columns(desired, [], cb, 3) == list(np.argsort(-signal, kind="stable")[:3])


def test_lsp_first_column_is_exhaustive_leakage_minimum(rng, make_link):
    A_T = orthonormal_columns(rng, 8, 4)
    desired = make_link(random_complex(rng, 4, 8))
    others = [make_link(random_complex(rng, 4, 8), path_loss=pl) for pl in (1.0, 4.0)]
    leak = [sum(np.linalg.norm(o.H @ A_T[:, j]) ** 2 / o.path_loss_linear for o in others) for j in range(4)]
    cb = Codebooks(A_T, orthonormal_columns(rng, 4, 4))
    assert select_lsp_columns(desired, others, cb, 2)[0] == int(np.argmin(leak))


def test_lsp_weight_shapes(rng, make_link):
    cb = Codebooks(orthonormal_columns(rng, 8, 6), orthonormal_columns(rng, 4, 4))
    weights = lsp_scheme(make_link(random_complex(rng, 4, 8)), [], cb, 2, (4, 3))
    assert weights.F_RF.shape == (8, 4)
    assert weights.F_BB.shape == (4, 2)
    assert weights.W_RF.shape == (4, 3)
    assert weights.W_BB.shape == (3, 2)


# SLNR


def test_slnr_without_leakage_or_noise_is_eigenmode(rng):
    eff = random_complex(rng, 4, 4)
    F_BB, _, state = slnr_scheme(eff, [], np.eye(4), 1.0, 0.0, 2)
    assert state.gamma == 0.0
    _, _, vh = np.linalg.svd(eff)
    assert np.allclose(projector(F_BB), projector(vh.conj().T[:, :2]), atol=1e-8)


def test_slnr_scalar_closed_form():
    h, g = 0.8 - 0.3j, 0.2 + 0.1j
    P, N0 = 2.0, 0.05
    F_BB, W_BB, state = slnr_scheme(np.array([[h]]), [np.array([[g]])], np.eye(1), P, N0, 1)
    assert abs(F_BB[0, 0]) == pytest.approx(1.0)
    assert abs(W_BB[0, 0]) == pytest.approx(1.0)
    assert state.gamma == pytest.approx(N0 / P)
    expected = abs(h) ** 2 / (abs(g) ** 2 + N0 / P)
    assert slnr_ratio(np.array([[h]]), [np.array([[g]])], state.gamma, F_BB) == pytest.approx(expected)


SLNR_SCORE = {1: slnr_ratio, 2: stream_slnr}


def random_stream_slnr(effective, leakage, gamma, candidates):
    """Vectorized stream_slnr over a stack of candidate precoders."""
    stacked = np.vstack(leakage)
    denominator = stacked.conj().T @ stacked + gamma * np.eye(effective.shape[1])
    signal = effective.conj().T @ effective
    herm = candidates.conj().transpose(0, 2, 1)
    gram = herm @ denominator @ candidates
    gain = herm @ signal @ candidates
    return np.real(np.trace(np.linalg.solve(gram, gain), axis1=1, axis2=2)) / candidates.shape[2]


@pytest.mark.parametrize("n_streams", [1, 2])
def test_slnr_beats_random_precoders(rng, n_streams):
    metric = SLNR_SCORE[n_streams]
    for _ in range(100):
        eff = random_complex(rng, 4, 4)
        leakage = [rng.uniform(0.1, 1.0) * random_complex(rng, 4, 4) for _ in range(int(rng.integers(1, 9)))]
        F_BB, _, state = slnr_scheme(eff, leakage, np.eye(4), 1.0, 0.1, n_streams)
        achieved = metric(eff, leakage, state.gamma, F_BB)
        candidates = random_complex(rng, 10_000, 4, n_streams)
        candidates /= np.linalg.norm(candidates, axis=(1, 2), keepdims=True)
        best_random = np.max(random_stream_slnr(eff, leakage, state.gamma, candidates))
        assert achieved >= best_random - 1e-9 * achieved


def test_vectorized_score_matches_stream_slnr(rng):
    eff = random_complex(rng, 4, 4)
    leakage = [random_complex(rng, 4, 4)]
    candidates = random_complex(rng, 5, 4, 2)
    scores = random_stream_slnr(eff, leakage, 0.3, candidates)
    for candidate, score in zip(candidates, scores):
        assert score == pytest.approx(stream_slnr(eff, leakage, 0.3, candidate), rel=1e-10)
    single = random_complex(rng, 3, 4, 1)
    for candidate, score in zip(single, random_stream_slnr(eff, leakage, 0.3, single)):
        assert score == pytest.approx(slnr_ratio(eff, leakage, 0.3, candidate), rel=1e-10)


def test_slnr_fixed_point_tracks_analog_scaling(rng):
    eff = random_complex(rng, 4, 4)
    F_RF = orthonormal_columns(rng, 8, 4)
    F_BB, _, state = slnr_scheme(eff, [random_complex(rng, 4, 4)], np.eye(4), 1.0, 0.1, 2, F_RF=F_RF)
    assert state.converged
    assert state.eta_iterates[-1] == pytest.approx(np.linalg.norm(F_RF @ F_BB) ** 2)


def test_slnr_non_convergence_carries_last_iterate(rng):
    eff = random_complex(rng, 4, 4)
    with pytest.raises(ConvergenceError) as info:
        slnr_scheme(eff, [random_complex(rng, 4, 4)], np.eye(4), 1.0, 0.1, 2, F_RF=2.0 * np.eye(4), max_iterations=1)
    assert len(info.value.iterates) == 2
    F_BB, W_BB, state = info.value.partial
    assert F_BB.shape == (4, 2) and W_BB.shape == (4, 2)
    assert not state.converged


def test_slnr_precoder_meets_power_constraint(rng):
    eff = random_complex(rng, 4, 4)
    F_RF = 3.0 * orthonormal_columns(rng, 16, 4)
    F_BB, W_BB, _ = slnr_scheme(eff, [random_complex(rng, 4, 4)], np.eye(4), 2.5, 0.1, 2, F_RF=F_RF)
    weights = HybridWeights.build(F_RF, F_BB, np.eye(4), W_BB)
    assert np.linalg.norm(weights.normalized_precoder(2.5)) ** 2 == pytest.approx(2.5)


# GMR


def test_gmr_is_conjugate_transpose():
    assert np.allclose(gmr_scheme(np.eye(2), 2), np.eye(2))
    assert np.allclose(gmr_scheme(np.diag([2.0, 1j]), 2), np.diag([2.0, -1j]))


def test_gmr_needs_streams_equal_to_ue_chains(rng):
    with pytest.raises(DimensionError):
        gmr_scheme(random_complex(rng, 4, 4), 2)


# Zero forcing


def test_zf_is_infeasible_for_three_users_per_cell(rng):
    # K*L*N_R^RF = 36 stacked rows through M_T^RF = 4 analog beams
    result = zf_rank_check(random_complex(rng, 36, 4))
    assert result.rank <= 4
    assert result.max_rank == 36
    assert not result.invertible


def test_zf_scalar_system_is_invertible():
    assert zf_rank_check(np.array([[0.7 + 0.2j]])).invertible


def test_zf_rank_of_tall_full_rank_stack(rng):
    assert zf_rank_check(random_complex(rng, 12, 4)).rank == 4


def test_gmr_needs_no_coordination(rng, tiny_config):
    system = draw_drop(tiny_config.with_overrides(streams_per_user=4), 0)
    ctx = system.context
    perturbed = {
        key: link if key[1] == ctx.cell(key[0]) else replace(link, H=link.H + random_complex(rng, *link.H.shape))
        for key, link in system.channels.items()
    }
    other_ctx = replace(ctx, channels=perturbed, _rf={})
    original = SCHEME_HANDLERS["gmr"](ctx)
    repeated = SCHEME_HANDLERS["gmr"](other_ctx)
    for user in ctx.users:
        assert np.array_equal(original[user].F_BB, repeated[user].F_BB)
        assert np.array_equal(original[user].W_BB, repeated[user].W_BB)


def test_every_scheme_meets_the_power_constraint(rng, make_link):
    for _ in range(1000):
        tx_power = rng.uniform(0.1, 10.0)
        desired = make_link(random_complex(rng, 4, 16), path_loss=rng.uniform(1.0, 1e3))
        others = [make_link(random_complex(rng, 4, 16), path_loss=rng.uniform(1.0, 1e3)) for _ in range(2)]
        A_T = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (16, 6))) / 4.0
        A_R = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (4, 5))) / 2.0
        cb = Codebooks(A_T, A_R)
        F_RF, W_RF = rf_select_max(desired.H, cb, 4, 4)
        effective = effective_channel(desired.H, F_RF, W_RF, desired.path_loss_linear)
        leakage = [effective_channel(o.H, F_RF, W_RF, o.path_loss_linear) for o in others]
        try:
            F_slnr, W_slnr, _ = slnr_scheme(effective, leakage, W_RF, tx_power, 1e-3, 2, F_RF=F_RF)
        except ConvergenceError as exc:
            F_slnr, W_slnr, _ = exc.partial
        F_base, W_base = baseline_scheme(effective, 2)
        F_gmr = gmr_scheme(effective, 4)
        candidates = [
            HybridWeights.build(F_RF, F_base, W_RF, W_base),
            lsp_scheme(desired, others, cb, 2, (4, 4)),
            HybridWeights.build(F_RF, F_slnr, W_RF, W_slnr),
            HybridWeights.build(F_RF, F_gmr, W_RF, matched_filter(effective, F_gmr)),
        ]
        for weights in candidates:
            assert np.linalg.norm(weights.normalized_precoder(tx_power)) ** 2 == pytest.approx(tx_power, rel=1e-9)
