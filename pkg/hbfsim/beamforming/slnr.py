"""
Signal-to-leakage-plus-noise ratio precoding.

Analog beams come from :func:`rf_select_max` for every user first; the
baseband precoder of each user is then the leading generalized eigenvectors
of (signal, leakage + gamma I), where gamma depends on the power scaling of
the very precoder being designed and is found by fixed-point iteration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from hbfsim.core.base import ConvergenceError, DefinitenessError, DimensionError
from hbfsim.core.linalg import ComplexMatrix, as_matrix, ctranspose, frob_norm, herm_gen_eig

from .codebook import HybridWeights, matched_filter
from .context import DropContext

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 50
RELATIVE_TOLERANCE = 1e-6
RIDGE = 1e-12


@dataclass(frozen=True, slots=True)
class SlnrSolverState:
    gamma: float
    eta_iterates: List[float] = field(default_factory=list)
    converged: bool = True


def stack_leakage(leakage: Sequence[ComplexMatrix], n_cols: int) -> ComplexMatrix:
    if not len(leakage):
        return np.zeros((0, n_cols), dtype=np.complex128)
    return np.vstack([as_matrix(block) for block in leakage])


def _leading_directions(signal: ComplexMatrix, denominator: ComplexMatrix, n_streams: int) -> ComplexMatrix:
    try:
        _, transform = herm_gen_eig(signal, denominator)
    except DefinitenessError:
        size = denominator.shape[0]
        ridge = RIDGE * max(np.trace(signal).real + np.trace(denominator).real, np.finfo(float).tiny) / size
        _, transform = herm_gen_eig(signal, denominator + ridge * np.eye(size))
    directions = transform[:, :n_streams]
    return directions / np.linalg.norm(directions, axis=0, keepdims=True)


def slnr_scheme(
    effective: ComplexMatrix,
    leakage: Sequence[ComplexMatrix],
    W_RF: ComplexMatrix,
    tx_power_w: float,
    noise_w: float,
    n_streams: int,
    *,
    F_RF: ComplexMatrix | None = None,
    max_iterations: int = MAX_ITERATIONS,
    tolerance: float = RELATIVE_TOLERANCE,
) -> Tuple[ComplexMatrix, ComplexMatrix, SlnrSolverState]:
    """
    Returns ``(F_BB, W_BB, state)``.

    ``leakage`` holds ``W_RF(m)^H H F_RF / sqrt(PL)`` for every other user
    ``m``. Without ``F_RF`` the power scaling is that of orthonormal analog
    beams, ``eta = N_S``, and the fixed point is reached immediately.
    """
    channel = as_matrix(effective)
    n_rx, n_tx = channel.shape
    if not 1 <= n_streams <= min(n_rx, n_tx):
        raise DimensionError(f"{n_streams} streams do not fit an effective channel of shape {channel.shape}.")
    stacked = stack_leakage(leakage, n_tx)
    if stacked.shape[1] != n_tx:
        raise DimensionError(f"Leakage blocks have {stacked.shape[1]} columns, expected {n_tx}.")
    signal = ctranspose(channel) @ channel
    leak = ctranspose(stacked) @ stacked
    noise_scale = noise_w * float(np.real(np.trace(W_RF @ ctranspose(W_RF)))) / (tx_power_w * n_streams)

    eta = float(n_streams)
    iterates = [eta]
    F_BB = np.zeros((n_tx, n_streams), dtype=np.complex128)
    gamma = 0.0
    converged = False
    for _ in range(max_iterations):
        gamma = eta * noise_scale
        F_BB = _leading_directions(signal, leak + gamma * np.eye(n_tx), n_streams)
        new_eta = frob_norm(as_matrix(F_RF) @ F_BB) ** 2 if F_RF is not None else float(n_streams)
        iterates.append(new_eta)
        change = abs(new_eta - eta) / eta
        eta = new_eta
        if change < tolerance:
            converged = True
            break

    W_BB = matched_filter(channel, F_BB)
    state = SlnrSolverState(gamma=gamma, eta_iterates=iterates, converged=converged)
    if not converged:
        raise ConvergenceError(
            f"SLNR power scaling did not converge in {max_iterations} iterations (last eta {eta:.6g}).",
            iterates=iterates,
            partial=(F_BB, W_BB, state),
        )
    return F_BB, W_BB, state


def slnr_ratio(
    effective: ComplexMatrix, leakage: Sequence[ComplexMatrix], gamma: float, F_BB: ComplexMatrix
) -> float:
    """Trace-form SLNR ``tr(F^H S F) / tr(F^H (L + gamma I) F)``."""
    channel = as_matrix(effective)
    precoder = as_matrix(F_BB)
    stacked = stack_leakage(leakage, channel.shape[1])
    numerator = frob_norm(channel @ precoder) ** 2
    denominator = frob_norm(stacked @ precoder) ** 2 + gamma * frob_norm(precoder) ** 2
    return numerator / denominator


def stream_slnr(
    effective: ComplexMatrix, leakage: Sequence[ComplexMatrix], gamma: float, F_BB: ComplexMatrix
) -> float:
    """
    Trace-form SLNR after giving every stream unit leakage-plus-noise.

    The precoder is re-weighted as ``F G^{-1/2}`` with ``G = F^H (L + gamma I) F``;
    for one stream this equals :func:`slnr_ratio`. The leading generalized
    eigenvectors maximize it over all precoders with the same stream count.
    """
    channel = as_matrix(effective)
    precoder = as_matrix(F_BB)
    stacked = stack_leakage(leakage, channel.shape[1])
    denominator = ctranspose(stacked) @ stacked + gamma * np.eye(channel.shape[1])
    gram = ctranspose(precoder) @ denominator @ precoder
    signal = ctranspose(precoder) @ ctranspose(channel) @ channel @ precoder
    return float(np.real(np.trace(np.linalg.solve(gram, signal)))) / precoder.shape[1]


def design_slnr(ctx: DropContext) -> Dict[int, HybridWeights]:
    for user in ctx.users:
        ctx.rf(user)
    weights: Dict[int, HybridWeights] = {}
    for user in ctx.users:
        F_RF, W_RF = ctx.rf(user)
        leakage = [ctx.effective(other, user) for other in ctx.others(user)]
        try:
            F_BB, W_BB, state = slnr_scheme(
                ctx.effective(user, user), leakage, W_RF, ctx.tx_power_w, ctx.noise_w, ctx.n_streams, F_RF=F_RF
            )
        except ConvergenceError as exc:
            logger.warning(f"User {user}: {exc}; keeping the last iterate")
            F_BB, W_BB, state = exc.partial
        weights[user] = HybridWeights.build(F_RF, F_BB, W_RF, W_BB, converged=state.converged)
    return weights


HANDLERS: Dict[str, Callable[[DropContext], Dict[int, HybridWeights]]] = {
    "slnr": design_slnr,
}
