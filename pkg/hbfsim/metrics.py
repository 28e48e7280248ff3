"""
Closed-form link metrics: interference covariance, spectral efficiency,
signal/interference power split and eigenvalue profiles.

Symbols and streams are never sampled; every quantity is evaluated from the
covariances directly. Channels are keyed by ``(user, tp)`` and users are
global indices whose serving TP is ``user_cells[user]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Mapping, Sequence, Tuple

import numpy as np
import scipy.linalg as sla

from hbfsim.beamforming.codebook import HybridWeights
from hbfsim.channel.model import ChannelRealization
from hbfsim.core.base import DimensionError, dbm_to_watts
from hbfsim.core.linalg import ComplexMatrix, as_matrix, ctranspose, frob_norm, svd

logger = logging.getLogger(__name__)

THERMAL_NOISE_DBM_PER_HZ = -174.0
WHITENING_RIDGE = 1e-12

Channels = Mapping[Tuple[int, int], ChannelRealization]
Weights = Mapping[int, HybridWeights]


@dataclass(frozen=True, slots=True)
class LinkBudget:
    transmit_power: float = 35.2
    noise_figure: float = 10.0
    bandwidth: float = 100e6
    carrier: float = 28.0

    @property
    def noise_power(self) -> float:
        """Receiver noise power ``N_0`` in dBm."""
        return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(self.bandwidth) + self.noise_figure

    @property
    def tx_power_w(self) -> float:
        return float(dbm_to_watts(self.transmit_power))

    @property
    def noise_w(self) -> float:
        return float(dbm_to_watts(self.noise_power))


@dataclass(frozen=True, slots=True)
class UserResult:
    """Metrics of one user under one scheme in one drop."""

    drop: int
    scheme: str
    user: int
    cell: int
    seed: int
    spectral_efficiency: float
    signal_power: float
    interference_power: float
    noise_power: float
    sinr_db: float
    regularized: bool = False
    converged: bool = True
    eigenvalues: Tuple[float, ...] = field(default_factory=tuple)

    def as_record(self) -> Dict[str, Any]:
        record = asdict(self)
        eigenvalues = record.pop("eigenvalues")
        for idx, value in enumerate(eigenvalues, start=1):
            record[f"eig{idx}"] = value
        return record


def _compensated_sum(terms: np.ndarray) -> np.ndarray:
    """Exactly rounded element-wise sum over axis 0, independent of term order."""
    real = np.apply_along_axis(math.fsum, 0, terms.real)
    imag = np.apply_along_axis(math.fsum, 0, terms.imag)
    return real + 1j * imag


def interference_covariance(
    target: int,
    weights: Weights,
    channels: Channels,
    budget: LinkBudget,
    user_cells: Sequence[int],
) -> ComplexMatrix:
    """Received covariance at ``target`` from every other user's transmission."""
    link = channels[(target, int(user_cells[target]))]
    n_rx = link.H.shape[0]
    terms = []
    for other, other_weights in weights.items():
        if other == target:
            continue
        interferer = channels[(target, int(user_cells[other]))]
        scale = budget.tx_power_w / (other_weights.eta * interferer.effective_path_loss)
        received = interferer.H @ other_weights.precoder
        terms.append(scale * (received @ ctranspose(received)))
    if not terms:
        return np.zeros((n_rx, n_rx), dtype=np.complex128)
    total = _compensated_sum(np.stack(terms))
    return 0.5 * (total + ctranspose(total))


def _received(target: int, weights: Weights, channels: Channels, budget: LinkBudget, user_cells: Sequence[int]):
    own = weights[target]
    link = channels[(target, int(user_cells[target]))]
    scale = budget.tx_power_w / (own.eta * link.effective_path_loss)
    combiner = own.combiner
    return scale, combiner, ctranspose(combiner) @ link.H @ own.precoder


def combiner_basis(combiner: ComplexMatrix) -> Tuple[ComplexMatrix, int]:
    """Orthonormal basis of the combiner's column space and its numerical rank."""
    matrix = as_matrix(combiner)
    U, s, _ = svd(matrix)
    if s.size == 0 or s[0] == 0.0:
        raise DimensionError("Combiner carries no energy.")
    rank = int(np.count_nonzero(s > max(matrix.shape) * np.finfo(float).eps * s[0]))
    return U[:, :rank], rank


def spectral_efficiency_detail(
    target: int,
    weights: Weights,
    channels: Channels,
    D: ComplexMatrix,
    budget: LinkBudget,
    user_cells: Sequence[int],
) -> Tuple[float, bool]:
    """Spectral efficiency in bit/s/Hz and whether the combiner or whitening matrix was rank deficient."""
    scale, combiner, _ = _received(target, weights, channels, budget, user_cells)
    if D.shape != (combiner.shape[0], combiner.shape[0]):
        raise DimensionError(f"Interference covariance {D.shape} does not match {combiner.shape[0]} antennas.")
    # the rate only depends on span(W_RF W_BB), so work on an orthonormal basis of it
    basis, rank = combiner_basis(combiner)
    regularized = rank < combiner.shape[1]
    if regularized:
        logger.warning(f"User {target}: combiner has rank {rank} of {combiner.shape[1]}, rate uses its column space")
    own = weights[target]
    link = channels[(target, int(user_cells[target]))]
    stream_gain = ctranspose(basis) @ link.H @ own.precoder
    whitening = ctranspose(basis) @ (budget.noise_w * np.eye(combiner.shape[0]) + D) @ basis
    whitening = 0.5 * (whitening + ctranspose(whitening))
    try:
        lower = sla.cholesky(whitening, lower=True)
    except np.linalg.LinAlgError:
        ridge = WHITENING_RIDGE * max(float(np.real(np.trace(whitening))), np.finfo(float).tiny)
        logger.warning(f"User {target}: singular whitening matrix, adding a {ridge:.3e} ridge")
        lower = sla.cholesky(whitening + ridge * np.eye(whitening.shape[0]), lower=True)
        regularized = True
    whitened = sla.solve_triangular(lower, stream_gain, lower=True)
    gains = np.clip(sla.eigvalsh(scale * (whitened @ ctranspose(whitened))), 0.0, None)
    return float(np.sum(np.log2(1.0 + gains))), regularized


def spectral_efficiency(
    target: int,
    weights: Weights,
    channels: Channels,
    D: ComplexMatrix,
    budget: LinkBudget,
    user_cells: Sequence[int],
) -> float:
    return spectral_efficiency_detail(target, weights, channels, D, budget, user_cells)[0]


def power_decomposition(
    target: int,
    weights: Weights,
    channels: Channels,
    budget: LinkBudget,
    user_cells: Sequence[int],
    D: ComplexMatrix | None = None,
) -> Tuple[float, float]:
    """Post-combining (signal, interference) power in watts."""
    scale, combiner, stream_gain = _received(target, weights, channels, budget, user_cells)
    if D is None:
        D = interference_covariance(target, weights, channels, budget, user_cells)
    signal = scale * frob_norm(stream_gain) ** 2
    interference = float(np.real(np.trace(ctranspose(combiner) @ D @ combiner)))
    return float(signal), max(interference, 0.0)


def eigenvalue_profile(H: ComplexMatrix, top_n: int) -> np.ndarray:
    """Largest ``top_n`` eigenvalues of ``H H^H``, descending."""
    matrix = as_matrix(H)
    if not 1 <= top_n <= matrix.shape[0]:
        raise DimensionError(f"top_n must be within 1..{matrix.shape[0]}, got {top_n}.")
    values = sla.eigvalsh(matrix @ ctranspose(matrix))[::-1]
    return np.clip(values[:top_n], 0.0, None)


def user_result(
    *,
    drop: int,
    scheme: str,
    seed: int,
    target: int,
    weights: Weights,
    channels: Channels,
    budget: LinkBudget,
    user_cells: Sequence[int],
    eigenvalues: Sequence[float] = (),
) -> UserResult:
    D = interference_covariance(target, weights, channels, budget, user_cells)
    se, regularized = spectral_efficiency_detail(target, weights, channels, D, budget, user_cells)
    signal, interference = power_decomposition(target, weights, channels, budget, user_cells, D)
    noise = budget.noise_w * frob_norm(weights[target].combiner) ** 2
    sinr = signal / (interference + noise) if interference + noise > 0 else math.inf
    return UserResult(
        drop=drop,
        scheme=scheme,
        user=target,
        cell=int(user_cells[target]),
        seed=seed,
        spectral_efficiency=se,
        signal_power=signal,
        interference_power=interference,
        noise_power=noise,
        sinr_db=10.0 * math.log10(sinr) if sinr > 0 else -math.inf,
        regularized=regularized,
        converged=weights[target].converged,
        eigenvalues=tuple(float(v) for v in eigenvalues),
    )


__all__ = [
    "THERMAL_NOISE_DBM_PER_HZ",
    "LinkBudget",
    "UserResult",
    "interference_covariance",
    "spectral_efficiency",
    "combiner_basis",
    "spectral_efficiency_detail",
    "power_decomposition",
    "eigenvalue_profile",
    "user_result",
]
