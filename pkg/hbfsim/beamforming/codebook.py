"""
Codebooks, hybrid weight containers and the shared analog selection steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from hbfsim.channel.model import ChannelRealization
from hbfsim.core.base import DimensionError
from hbfsim.core.linalg import ComplexMatrix, as_matrix, ctranspose, frob_norm, svd
from hbfsim.geometry.array import UraConfig, ura_responses

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Codebooks:
    """Steering vectors toward the desired user's rays, one column per ray."""

    A_T: ComplexMatrix
    A_R: ComplexMatrix

    @property
    def size(self) -> int:
        return int(self.A_T.shape[1])


@dataclass(frozen=True, slots=True)
class HybridWeights:
    """One user's analog and digital precoder/combiner plus the power scaling ``eta``."""

    F_RF: ComplexMatrix
    F_BB: ComplexMatrix
    W_RF: ComplexMatrix
    W_BB: ComplexMatrix
    eta: float
    converged: bool = True

    @classmethod
    def build(
        cls,
        F_RF: ComplexMatrix,
        F_BB: ComplexMatrix,
        W_RF: ComplexMatrix,
        W_BB: ComplexMatrix,
        converged: bool = True,
    ) -> "HybridWeights":
        F_RF, F_BB, W_RF, W_BB = (as_matrix(m) for m in (F_RF, F_BB, W_RF, W_BB))
        if F_RF.shape[1] != F_BB.shape[0] or W_RF.shape[1] != W_BB.shape[0]:
            raise DimensionError(
                f"RF/BB shapes do not chain: F {F_RF.shape}x{F_BB.shape}, W {W_RF.shape}x{W_BB.shape}."
            )
        eta = frob_norm(F_RF @ F_BB) ** 2
        if eta <= 0.0:
            raise DimensionError("Hybrid precoder carries no power.")
        return cls(F_RF, F_BB, W_RF, W_BB, float(eta), converged)

    @property
    def precoder(self) -> ComplexMatrix:
        return self.F_RF @ self.F_BB

    @property
    def combiner(self) -> ComplexMatrix:
        return self.W_RF @ self.W_BB

    @property
    def n_streams(self) -> int:
        return int(self.F_BB.shape[1])

    def normalized_precoder(self, tx_power_w: float) -> ComplexMatrix:
        """``sqrt(P_t / eta) F_RF F_BB``, whose squared Frobenius norm is ``P_t``."""
        return np.sqrt(tx_power_w / self.eta) * self.precoder


def build_codebooks(desired: ChannelRealization, tp_cfg: UraConfig, ue_cfg: UraConfig) -> Codebooks:
    rays = desired.rays
    if len(rays) == 0:
        raise DimensionError("Cannot build codebooks from a channel without rays.")
    return Codebooks(
        A_T=ura_responses(tp_cfg, rays.azimuth_dep, rays.elevation_dep),
        A_R=ura_responses(ue_cfg, rays.azimuth_arr, rays.elevation_arr),
    )


def effective_channel(
    H: ComplexMatrix, F_RF: ComplexMatrix, W_RF: ComplexMatrix, path_loss: float = 1.0
) -> ComplexMatrix:
    """``W_RF^H H F_RF / sqrt(PL)``."""
    return ctranspose(W_RF) @ H @ F_RF / np.sqrt(path_loss)


def matched_filter(effective: ComplexMatrix, F_BB: ComplexMatrix) -> ComplexMatrix:
    """Unit-Frobenius-norm receive filter ``H F_BB / ||H F_BB||_F``."""
    response = as_matrix(effective) @ as_matrix(F_BB)
    norm = frob_norm(response)
    if norm == 0.0:
        raise DimensionError("Matched filter is undefined for a zero effective response.")
    return response / norm


def _available(used: npt.NDArray[np.bool_], role: str) -> npt.NDArray[np.bool_]:
    if used.all():
        logger.warning(f"Codebook has only {used.size} {role} columns; reusing columns for extra RF chains")
        return np.ones_like(used)
    return ~used


def rf_select_max(
    H: ComplexMatrix, cb: Codebooks, n_tx_chains: int, n_rx_chains: int
) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Greedy joint selection of analog precoder and combiner columns.

    Each step adds the codebook pair that most increases
    ``||W_RF^H H F_RF||_F^2`` given the columns already fixed. A column is
    only reused once every column of its codebook has been used.
    """
    if n_tx_chains < 1 or n_rx_chains < 1:
        raise DimensionError("At least one RF chain is required on each side.")
    if cb.A_T.shape[1] == 0 or cb.A_R.shape[1] == 0:
        raise DimensionError("Cannot select RF beams from an empty codebook.")
    power = np.abs(ctranspose(cb.A_R) @ H @ cb.A_T) ** 2
    used_tx = np.zeros(power.shape[1], dtype=bool)
    used_rx = np.zeros(power.shape[0], dtype=bool)
    tx_idx: List[int] = []
    rx_idx: List[int] = []
    for chain in range(max(n_tx_chains, n_rx_chains)):
        # gain of adding row i / column j given the fixed columns
        row_gain = power[:, tx_idx].sum(axis=1)
        col_gain = power[rx_idx, :].sum(axis=0)
        if chain < n_tx_chains and chain < n_rx_chains:
            score = row_gain[:, None] + col_gain[None, :] + power
            mask = np.outer(_available(used_rx, "receive"), _available(used_tx, "transmit"))
            i, j = np.unravel_index(np.argmax(np.where(mask, score, -np.inf)), score.shape)
            rx_idx.append(int(i))
            tx_idx.append(int(j))
            used_rx[i] = used_tx[j] = True
        elif chain < n_tx_chains:
            j = int(np.argmax(np.where(_available(used_tx, "transmit"), col_gain, -np.inf)))
            tx_idx.append(j)
            used_tx[j] = True
        else:
            i = int(np.argmax(np.where(_available(used_rx, "receive"), row_gain, -np.inf)))
            rx_idx.append(i)
            used_rx[i] = True
    return cb.A_T[:, tx_idx], cb.A_R[:, rx_idx]


def rf_objective(H: ComplexMatrix, F_RF: ComplexMatrix, W_RF: ComplexMatrix) -> float:
    return frob_norm(ctranspose(W_RF) @ H @ F_RF) ** 2


def greedy_columns(
    scores: npt.NDArray[np.float64], count: int, used: Sequence[int] = (), *, role: str
) -> List[int]:
    """Highest-scoring distinct ``role`` codebook columns, reusing the best one once all are taken."""
    taken = np.zeros(scores.size, dtype=bool)
    taken[list(used)] = True
    picks: List[int] = []
    for _ in range(count):
        pick = int(np.argmax(np.where(_available(taken, role), scores, -np.inf)))
        picks.append(pick)
        taken[pick] = True
    return picks


def omp_combiner(
    W_opt: ComplexMatrix, A_R: ComplexMatrix, n_rx_chains: int
) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """
    Orthogonal matching pursuit of an unconstrained combiner onto codebook columns.

    Returns ``(W_RF, W_BB)`` with ``W_RF W_BB`` the least-squares fit of ``W_opt``.
    """
    target = as_matrix(W_opt)
    if A_R.shape[1] == 0:
        raise DimensionError("Cannot decompose a combiner over an empty codebook.")
    residual = target.copy()
    floor = 1e-12 * frob_norm(target)
    used = np.zeros(A_R.shape[1], dtype=bool)
    chosen: List[int] = []
    baseband = np.zeros((0, target.shape[1]), dtype=np.complex128)
    for _ in range(n_rx_chains):
        # an exact fit leaves nothing to match, so fall back to the target
        source = residual if frob_norm(residual) > floor else target
        correlation = np.sum(np.abs(ctranspose(A_R) @ source) ** 2, axis=1)
        pick = int(np.argmax(np.where(_available(used, "receive"), correlation, -np.inf)))
        chosen.append(pick)
        used[pick] = True
        W_RF = A_R[:, chosen]
        baseband = np.linalg.lstsq(W_RF, target, rcond=None)[0]
        residual = target - W_RF @ baseband
        norm = frob_norm(residual)
        residual = residual / norm if norm > floor else np.zeros_like(residual)
    return A_R[:, chosen], baseband


def dominant_right_vectors(matrix: ComplexMatrix, n_streams: int) -> ComplexMatrix:
    _, _, V = svd(matrix)
    if n_streams > V.shape[1]:
        raise DimensionError(f"Cannot take {n_streams} streams from a rank-{V.shape[1]} decomposition.")
    return V[:, :n_streams]


def dominant_left_vectors(matrix: ComplexMatrix, n_streams: int) -> ComplexMatrix:
    U, _, _ = svd(matrix)
    if n_streams > U.shape[1]:
        raise DimensionError(f"Cannot take {n_streams} streams from a rank-{U.shape[1]} decomposition.")
    return U[:, :n_streams]


__all__ = [
    "Codebooks",
    "HybridWeights",
    "build_codebooks",
    "effective_channel",
    "matched_filter",
    "rf_select_max",
    "rf_objective",
    "greedy_columns",
    "omp_combiner",
    "dominant_right_vectors",
    "dominant_left_vectors",
]
