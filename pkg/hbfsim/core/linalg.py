"""
Dense complex linear algebra used by every beamforming scheme.

Thin, contract-checked wrappers around LAPACK (through scipy.linalg) that fix
the conventions the rest of the package relies on: singular values and
eigenvalues descending with stable tie order, ``V`` returned un-conjugated,
and definiteness failures surfaced as :class:`DefinitenessError`.
"""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg as sla

from .base import ConvergenceError, DefinitenessError, DimensionError, DomainError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

HERMITIAN_TOL = 1e-12
RANK_RTOL = 1e-10


def as_matrix(value: npt.ArrayLike) -> ComplexMatrix:
    """Coerce scalars, vectors (as columns) and matrices to 2-D complex128."""
    array = np.asarray(value, dtype=np.complex128)
    if array.ndim == 0:
        return array.reshape(1, 1)
    if array.ndim == 1:
        return array.reshape(-1, 1)
    if array.ndim != 2:
        raise DimensionError(f"Expected a matrix, got an array with shape {array.shape}.")
    return array


def ctranspose(a: ComplexMatrix) -> ComplexMatrix:
    return np.conj(a).T


def frob_norm(a: npt.ArrayLike) -> float:
    array = np.asarray(a)
    if array.size == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(array) ** 2)))


def descending_order(values: npt.ArrayLike) -> npt.NDArray[np.intp]:
    """Indices sorting ``values`` descending; equal values keep input order."""
    return np.argsort(-np.asarray(values, dtype=float), kind="stable")


def svd(a: npt.ArrayLike) -> Tuple[ComplexMatrix, RealVector, ComplexMatrix]:
    """
    Thin SVD ``A = U diag(s) V^H``.

    Returns ``(U, s, V)`` with ``s`` descending. The divide-and-conquer driver
    is tried first; ``gesvd`` is the fallback when it fails to converge.
    """
    matrix = as_matrix(a)
    if matrix.size == 0:
        raise DimensionError("SVD of an empty matrix is undefined.")
    try:
        u, s, vh = sla.svd(matrix, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning(f"gesdd failed on a {matrix.shape} matrix, retrying with gesvd")
        try:
            u, s, vh = sla.svd(matrix, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    order = descending_order(s)
    return u[:, order], s[order], ctranspose(vh)[:, order]


def _require_hermitian(a: ComplexMatrix, label: str) -> ComplexMatrix:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{label} must be square, got shape {a.shape}.")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if np.max(np.abs(a - ctranspose(a)), initial=0.0) > HERMITIAN_TOL * scale:
        raise DomainError(f"{label} is not Hermitian within {HERMITIAN_TOL}.")
    return 0.5 * (a + ctranspose(a))


def cholesky(b: npt.ArrayLike) -> ComplexMatrix:
    """Lower-triangular ``L`` with ``L L^H = B`` for Hermitian positive-definite ``B``."""
    matrix = _require_hermitian(as_matrix(b), "B")
    try:
        return sla.cholesky(matrix, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise DefinitenessError(f"Matrix is not positive definite: {exc}") from exc


def herm_gen_eig(a: npt.ArrayLike, b: npt.ArrayLike) -> Tuple[RealVector, ComplexMatrix]:
    """
    Solve ``A t = lambda B t`` for Hermitian ``A`` and Hermitian PD ``B``.

    Reduces to the standard problem ``C = L^-1 A L^-H`` with ``B = L L^H``;
    eigenvectors are mapped back as ``T = L^-H Y`` so that ``T^H B T = I``.
    """
    a_h = _require_hermitian(as_matrix(a), "A")
    b_mat = as_matrix(b)
    if a_h.shape != b_mat.shape:
        raise DimensionError(f"A {a_h.shape} and B {b_mat.shape} must have equal shapes.")
    lower = cholesky(b_mat)
    half = sla.solve_triangular(lower, a_h, lower=True)
    reduced = ctranspose(sla.solve_triangular(lower, ctranspose(half), lower=True))
    reduced = 0.5 * (reduced + ctranspose(reduced))
    eigvals, eigvecs = sla.eigh(reduced)
    order = descending_order(eigvals)
    eigvecs = eigvecs[:, order]
    transform = sla.solve_triangular(lower, eigvecs, lower=True, trans="C")
    return eigvals[order], transform


def numerical_rank(a: npt.ArrayLike, rtol: float = RANK_RTOL) -> int:
    """Number of singular values above ``rtol`` times the largest."""
    _, s, _ = svd(a)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


__all__ = [
    "ComplexMatrix",
    "RealVector",
    "HERMITIAN_TOL",
    "RANK_RTOL",
    "as_matrix",
    "ctranspose",
    "frob_norm",
    "descending_order",
    "svd",
    "cholesky",
    "herm_gen_eig",
    "numerical_rank",
]
