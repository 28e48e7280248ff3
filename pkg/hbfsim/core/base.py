"""
Shared utilities for the simulator.

This module centralises the exception hierarchy, unit conversions and the
random-stream derivation so that the channel, beamforming and harness layers
can remain focused on their own domain logic.
"""

from __future__ import annotations

from typing import Any, Sequence, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


class SimulationError(Exception):
    """Raised when the simulator cannot fulfil a request."""

    exit_code: int = 1


class ConfigurationError(SimulationError):
    """Raised when a campaign configuration is invalid or inconsistent."""

    exit_code = 2


class ReportError(SimulationError):
    """Raised when results or channel dumps cannot be written or read."""

    exit_code = 3


class ConvergenceError(SimulationError):
    """Raised when an iterative numerical procedure fails to converge."""

    exit_code = 4

    def __init__(self, message: str, iterates: Sequence[float] = (), partial: Any = None) -> None:
        super().__init__(message)
        self.iterates = list(iterates)
        self.partial = partial


class DefinitenessError(SimulationError):
    """Raised when a matrix required to be positive definite is not."""

    exit_code = 5


class DimensionError(SimulationError):
    """Raised when matrix dimensions do not satisfy an operation's contract."""

    exit_code = 5


class DomainError(SimulationError):
    """Raised when an argument lies outside a model's domain of validity."""

    exit_code = 5


def db_to_linear(value_db: ArrayLike) -> ArrayLike:
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value: ArrayLike) -> ArrayLike:
    return 10.0 * np.log10(np.asarray(value, dtype=float))


def dbm_to_watts(value_dbm: ArrayLike) -> ArrayLike:
    return db_to_linear(value_dbm) * 1e-3


def watts_to_dbm(value_w: ArrayLike) -> ArrayLike:
    return linear_to_db(np.asarray(value_w, dtype=float) * 1e3)


def wrap_degrees(angle: ArrayLike) -> ArrayLike:
    """Wrap angles to the half-open interval [-180, 180)."""
    return (np.asarray(angle, dtype=float) + 180.0) % 360.0 - 180.0


# Stream tags keep layout draws and link draws from ever sharing a key.
LAYOUT_STREAM = 0
LINK_STREAM = 1
COVERAGE_STREAM = 2


def derive_rng(*keys: int) -> np.random.Generator:
    """
    Build an independent generator from an integer key path.

    Campaigns use ``(seed, drop, LAYOUT_STREAM)`` for user placement and
    ``(seed, drop, LINK_STREAM, tp, user)`` for each channel link, so a
    result never depends on the order in which work is scheduled.
    """
    if not keys:
        raise ValueError("At least one key is required to derive a stream.")
    if any(int(key) < 0 for key in keys):
        raise ValueError(f"Stream keys must be non-negative, got {keys}.")
    return np.random.default_rng(np.random.SeedSequence([int(key) for key in keys]))


__all__ = [
    "SimulationError",
    "ConfigurationError",
    "ReportError",
    "ConvergenceError",
    "DefinitenessError",
    "DimensionError",
    "DomainError",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "wrap_degrees",
    "LAYOUT_STREAM",
    "LINK_STREAM",
    "COVERAGE_STREAM",
    "derive_rng",
]
