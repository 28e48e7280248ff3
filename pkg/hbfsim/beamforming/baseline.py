"""
Eigenmode transmission without inter-cell coordination.
"""

from __future__ import annotations

from typing import Callable, Dict, Tuple

from hbfsim.core.base import DimensionError
from hbfsim.core.linalg import ComplexMatrix, as_matrix

from .codebook import HybridWeights, dominant_left_vectors, dominant_right_vectors
from .context import DropContext


def baseline_scheme(effective: ComplexMatrix, n_streams: int) -> Tuple[ComplexMatrix, ComplexMatrix]:
    """Top right singular vectors of the effective channel, then the matching left vectors."""
    channel = as_matrix(effective)
    if not 1 <= n_streams <= min(channel.shape):
        raise DimensionError(f"{n_streams} streams do not fit an effective channel of shape {channel.shape}.")
    F_BB = dominant_right_vectors(channel, n_streams)
    W_BB = dominant_left_vectors(channel @ F_BB, n_streams)
    return F_BB, W_BB


def design_baseline(ctx: DropContext) -> Dict[int, HybridWeights]:
    weights: Dict[int, HybridWeights] = {}
    for user in ctx.users:
        F_RF, W_RF = ctx.rf(user)
        F_BB, W_BB = baseline_scheme(ctx.effective(user, user), ctx.n_streams)
        weights[user] = HybridWeights.build(F_RF, F_BB, W_RF, W_BB)
    return weights


HANDLERS: Dict[str, Callable[[DropContext], Dict[int, HybridWeights]]] = {
    "baseline": design_baseline,
}
