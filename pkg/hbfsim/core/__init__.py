"""Numeric kernels, errors and registries shared across the simulator."""

from .base import (
    ConfigurationError,
    ConvergenceError,
    DefinitenessError,
    DimensionError,
    DomainError,
    ReportError,
    SimulationError,
    derive_rng,
)
from .linalg import cholesky, ctranspose, frob_norm, herm_gen_eig, numerical_rank, svd
from .registry import Registry

__all__ = [
    "ConfigurationError",
    "ConvergenceError",
    "DefinitenessError",
    "DimensionError",
    "DomainError",
    "ReportError",
    "SimulationError",
    "derive_rng",
    "cholesky",
    "ctranspose",
    "frob_norm",
    "herm_gen_eig",
    "numerical_rank",
    "svd",
    "Registry",
]
