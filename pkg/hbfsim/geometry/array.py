"""
Uniform rectangular arrays: steering vectors and element radiation patterns.

Element ordering inside a steering vector is polarization-major, then
row (elevation axis), then column (azimuth axis). Both polarizations of a
dual-polarized element share the same position, so the spatial phase is
repeated once per polarization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
import numpy.typing as npt

from hbfsim.core.base import ConfigurationError, DomainError, wrap_degrees
from hbfsim.core.linalg import ComplexMatrix

# Sectoral element pattern parameters (3 dB beamwidths in degrees, floors in dB).
AZIMUTH_BEAMWIDTH_DEG = 65.0
ELEVATION_BEAMWIDTH_DEG = 65.0
MAX_ATTENUATION_DB = 30.0
SIDE_LOBE_LEVEL_DB = 30.0


class Role(Enum):
    """Link end an array belongs to, with its default element behaviour."""

    TP = {"role": "tp", "gain_max_dbi": 8.0, "sectoral": True}
    UE = {"role": "ue", "gain_max_dbi": 0.0, "sectoral": False}

    @property
    def gain_max_dbi(self) -> float:
        return float(self.value["gain_max_dbi"])

    @property
    def sectoral(self) -> bool:
        return bool(self.value["sectoral"])


@dataclass(frozen=True, slots=True)
class UraConfig:
    """Geometry of a uniform rectangular array; spacings are in wavelengths."""

    rows: int
    cols: int
    polarizations: int = 1
    spacing_azimuth: float = 0.5
    spacing_elevation: float = 1.0
    boresight_azimuth: float = 0.0
    element_gain_max: float = 0.0
    role: Role = Role.UE

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ConfigurationError(f"Array needs at least one row and column, got {self.rows}x{self.cols}.")
        if self.polarizations not in (1, 2):
            raise ConfigurationError(f"polarizations must be 1 or 2, got {self.polarizations}.")
        if self.spacing_azimuth <= 0 or self.spacing_elevation <= 0:
            raise ConfigurationError("Element spacings must be strictly positive.")

    @property
    def n_spatial(self) -> int:
        return self.rows * self.cols

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols * self.polarizations

    def facing(self, azimuth: float) -> "UraConfig":
        """Copy of this array rotated so its boresight points at ``azimuth``."""
        return replace(self, boresight_azimuth=float(azimuth))


def _check_finite(*values: npt.ArrayLike) -> None:
    for value in values:
        if not np.all(np.isfinite(np.asarray(value, dtype=float))):
            raise DomainError("Steering angles must be finite.")


def spatial_phases(cfg: UraConfig, azimuth: npt.ArrayLike, elevation: npt.ArrayLike) -> ComplexMatrix:
    """Unnormalized planar-wavefront phasors, one column per direction (n_spatial x R)."""
    az = np.atleast_1d(np.asarray(azimuth, dtype=float))
    el = np.atleast_1d(np.asarray(elevation, dtype=float))
    _check_finite(az, el)
    az, el = np.broadcast_arrays(az, el)
    phi = np.deg2rad(wrap_degrees(az - cfg.boresight_azimuth))
    theta = np.deg2rad(el)
    col_idx = np.tile(np.arange(cfg.cols), cfg.rows)
    row_idx = np.repeat(np.arange(cfg.rows), cfg.cols)
    phase = 2.0 * np.pi * (
        np.outer(col_idx * cfg.spacing_azimuth, np.cos(theta) * np.sin(phi))
        + np.outer(row_idx * cfg.spacing_elevation, np.sin(theta))
    )
    return np.exp(1j * phase)


def ura_responses(cfg: UraConfig, azimuth: npt.ArrayLike, elevation: npt.ArrayLike) -> ComplexMatrix:
    """Unit-norm steering vectors for several directions, stacked as columns."""
    spatial = spatial_phases(cfg, azimuth, elevation)
    return np.tile(spatial, (cfg.polarizations, 1)) / np.sqrt(cfg.n_elements)


def ura_response(cfg: UraConfig, azimuth: float, elevation: float) -> ComplexMatrix:
    """Unit-norm steering vector (N x 1) towards a global azimuth/elevation in degrees."""
    return ura_responses(cfg, [azimuth], [elevation])


def element_gain(
    azimuth_off_boresight: npt.ArrayLike,
    elevation: npt.ArrayLike,
    role: Role,
    gain_max: float | None = None,
) -> npt.NDArray[np.float64] | float:
    """
    Element gain in dBi.

    TP elements follow the sectoral pattern with 65 degree beamwidths and a
    30 dB floor; UE elements are omnidirectional.
    """
    g_max = role.gain_max_dbi if gain_max is None else float(gain_max)
    phi = wrap_degrees(azimuth_off_boresight)
    theta = np.asarray(elevation, dtype=float)
    if not role.sectoral:
        gain = np.full(np.broadcast(phi, theta).shape, g_max)
    else:
        horizontal = -np.minimum(12.0 * (phi / AZIMUTH_BEAMWIDTH_DEG) ** 2, MAX_ATTENUATION_DB)
        vertical = -np.minimum(12.0 * (theta / ELEVATION_BEAMWIDTH_DEG) ** 2, SIDE_LOBE_LEVEL_DB)
        gain = g_max - np.minimum(-(horizontal + vertical), MAX_ATTENUATION_DB)
    if np.ndim(gain) == 0:
        return float(gain)
    return gain


__all__ = [
    "Role",
    "UraConfig",
    "spatial_phases",
    "ura_responses",
    "ura_response",
    "element_gain",
]
