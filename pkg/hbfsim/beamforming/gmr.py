"""
Generalized maximum-ratio transmission: the baseband precoder is the
conjugate transpose of the user's own effective channel, so no TP needs
another user's channel state.
"""

from __future__ import annotations

from typing import Callable, Dict

from hbfsim.core.base import DimensionError
from hbfsim.core.linalg import ComplexMatrix, as_matrix, ctranspose

from .codebook import HybridWeights, matched_filter
from .context import DropContext


def gmr_scheme(effective: ComplexMatrix, n_streams: int | None = None) -> ComplexMatrix:
    channel = as_matrix(effective)
    if n_streams is not None and n_streams != channel.shape[0]:
        raise DimensionError(
            f"GMR needs as many streams as UE RF chains, got {n_streams} streams and {channel.shape[0]} chains."
        )
    return ctranspose(channel)


def design_gmr(ctx: DropContext) -> Dict[int, HybridWeights]:
    weights: Dict[int, HybridWeights] = {}
    for user in ctx.users:
        F_RF, W_RF = ctx.rf(user)
        effective = ctx.effective(user, user)
        F_BB = gmr_scheme(effective, ctx.n_streams)
        weights[user] = HybridWeights.build(F_RF, F_BB, W_RF, matched_filter(effective, F_BB))
    return weights


HANDLERS: Dict[str, Callable[[DropContext], Dict[int, HybridWeights]]] = {
    "gmr": design_gmr,
}
