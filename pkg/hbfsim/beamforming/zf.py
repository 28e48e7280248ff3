"""
Rank analysis showing why a generalized zero-forcing precoder is infeasible
after analog beamforming.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from hbfsim.core.linalg import ComplexMatrix, as_matrix, ctranspose, numerical_rank

from .context import DropContext


class ZfRank(NamedTuple):
    rank: int
    max_rank: int
    invertible: bool


def zf_rank_check(stacked: ComplexMatrix) -> ZfRank:
    """Numerical rank of ``H H^H`` for the stacked effective channels of every user."""
    matrix = as_matrix(stacked)
    gram = matrix @ ctranspose(matrix)
    rank = numerical_rank(gram)
    return ZfRank(rank=rank, max_rank=matrix.shape[0], invertible=rank == matrix.shape[0])


def stack_effectives(ctx: DropContext, tx_user: int, rx_users: Sequence[int] | None = None) -> ComplexMatrix:
    """Effective channels of every user through ``tx_user``'s analog precoder, stacked."""
    users = ctx.users if rx_users is None else rx_users
    return np.vstack([ctx.effective(rx, tx_user) for rx in users])


__all__ = ["ZfRank", "zf_rank_check", "stack_effectives"]
