"""
Leakage-suppressing precoding.

The first analog precoder column is the codebook beam that leaks least into
every other user served by the same TP; the remaining columns maximize the
desired channel gain. The combiner is a hybrid fit of the optimal digital
combiner.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from hbfsim.channel.model import ChannelRealization
from hbfsim.core.base import DimensionError
from hbfsim.core.linalg import ComplexMatrix

from .codebook import (
    Codebooks,
    HybridWeights,
    dominant_left_vectors,
    dominant_right_vectors,
    greedy_columns,
    omp_combiner,
)
from .context import DropContext

logger = logging.getLogger(__name__)


def leakage_matrix(leakage_channels: Sequence[ChannelRealization]) -> ComplexMatrix:
    """Stack ``H / sqrt(PL)`` of every other user seen from this TP."""
    return np.vstack([link.H / np.sqrt(link.effective_path_loss) for link in leakage_channels])


def select_lsp_columns(
    desired: ChannelRealization,
    leakage_channels: Sequence[ChannelRealization],
    cb: Codebooks,
    n_tx_chains: int,
) -> List[int]:
    signal = np.sum(np.abs(desired.H @ cb.A_T) ** 2, axis=0)
    if leakage_channels:
        leakage = np.sum(np.abs(leakage_matrix(leakage_channels) @ cb.A_T) ** 2, axis=0)
        first = int(np.argmin(leakage))
    else:
        first = int(np.argmax(signal))
    return [first] + greedy_columns(signal, n_tx_chains - 1, used=[first], role="transmit")


def lsp_scheme(
    desired: ChannelRealization,
    leakage_channels: Sequence[ChannelRealization],
    cb: Codebooks,
    n_streams: int,
    chains: Tuple[int, int],
) -> HybridWeights:
    n_tx, n_rx = chains
    if n_tx < 1 or n_rx < 1:
        raise DimensionError("At least one RF chain is required on each side.")
    if cb.size == 0:
        raise DimensionError("Cannot select RF beams from an empty codebook.")
    if n_streams > min(n_tx, n_rx):
        raise DimensionError(f"{n_streams} streams exceed the RF chains {chains}.")
    if cb.size < n_tx:
        logger.warning(f"Only {cb.size} transmit beams for {n_tx} RF chains; columns will be reused")
    F_RF = cb.A_T[:, select_lsp_columns(desired, leakage_channels, cb, n_tx)]
    through_rf = desired.H @ F_RF
    F_BB = dominant_right_vectors(through_rf, n_streams)
    W_opt = dominant_left_vectors(through_rf @ F_BB, n_streams)
    W_RF, W_BB = omp_combiner(W_opt, cb.A_R, n_rx)
    return HybridWeights.build(F_RF, F_BB, W_RF, W_BB)


def design_lsp(ctx: DropContext) -> Dict[int, HybridWeights]:
    weights: Dict[int, HybridWeights] = {}
    for user in ctx.users:
        tp = ctx.cell(user)
        leakage = [ctx.channels[(other, tp)] for other in ctx.others(user)]
        weights[user] = lsp_scheme(
            ctx.desired(user), leakage, ctx.codebooks[user], ctx.n_streams, (ctx.tx_chains, ctx.rx_chains)
        )
    return weights


HANDLERS: Dict[str, Callable[[DropContext], Dict[int, HybridWeights]]] = {
    "lsp": design_lsp,
}
