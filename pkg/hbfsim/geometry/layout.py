"""
Three-sector site layout and random user drops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import numpy.typing as npt

from hbfsim.core.base import ConfigurationError, wrap_degrees

SECTOR_SPAN_DEG = 120.0


@dataclass(frozen=True, slots=True)
class SectorLayout:
    """One site with three co-located TPs, each serving a 120 degree wedge."""

    site_position: Tuple[float, float] = (0.0, 0.0)
    sector_boresights: Tuple[float, float, float] = (30.0, 150.0, 270.0)
    cell_radius: float = 50.0
    min_distance: float = 10.0
    tp_height: float = 10.0
    ue_height: float = 1.5

    def __post_init__(self) -> None:
        if len(self.sector_boresights) != 3:
            raise ConfigurationError("Exactly three sector boresights are required.")
        ordered = sorted(float(b) % 360.0 for b in self.sector_boresights)
        gaps = np.diff(ordered + [ordered[0] + 360.0])
        if not np.allclose(gaps, SECTOR_SPAN_DEG, atol=1e-9):
            raise ConfigurationError(f"Sector boresights must be 120 degrees apart, got {self.sector_boresights}.")
        if not 0.0 < self.min_distance < self.cell_radius:
            raise ConfigurationError(
                f"Need 0 < min_distance < cell_radius, got {self.min_distance} and {self.cell_radius}."
            )
        if self.tp_height < 0 or self.ue_height < 0:
            raise ConfigurationError("Heights must be non-negative.")

    @property
    def n_cells(self) -> int:
        return len(self.sector_boresights)


@dataclass(frozen=True, slots=True)
class UserDrop:
    """Users of one drop, ordered cell-major; user ``k`` of cell ``l`` sits at ``l*K + k``."""

    cells: npt.NDArray[np.int64]
    positions: npt.NDArray[np.float64]
    distances: npt.NDArray[np.float64]
    azimuths: npt.NDArray[np.float64] = field(repr=False)

    @property
    def n_users(self) -> int:
        return int(self.cells.size)

    def users_in_cell(self, cell: int) -> npt.NDArray[np.intp]:
        return np.flatnonzero(self.cells == cell)


def drop_users(layout: SectorLayout, users_per_cell: int, rng: np.random.Generator) -> UserDrop:
    """Drop users uniformly in area over each sector's annular wedge."""
    if users_per_cell < 1:
        raise ConfigurationError(f"users_per_cell must be at least 1, got {users_per_cell}.")
    r_min2 = layout.min_distance**2
    r_max2 = layout.cell_radius**2
    cells, radii, azimuths = [], [], []
    for cell, boresight in enumerate(layout.sector_boresights):
        u = rng.random(users_per_cell)
        radii.append(np.sqrt(u * (r_max2 - r_min2) + r_min2))
        offsets = rng.uniform(-SECTOR_SPAN_DEG / 2.0, SECTOR_SPAN_DEG / 2.0, users_per_cell)
        azimuths.append(wrap_degrees(boresight + offsets))
        cells.append(np.full(users_per_cell, cell, dtype=np.int64))
    radius = np.clip(np.concatenate(radii), layout.min_distance, layout.cell_radius)
    azimuth = np.concatenate(azimuths)
    angle = np.deg2rad(azimuth)
    positions = np.column_stack(
        (layout.site_position[0] + radius * np.cos(angle), layout.site_position[1] + radius * np.sin(angle))
    )
    return UserDrop(cells=np.concatenate(cells), positions=positions, distances=radius, azimuths=azimuth)


__all__ = ["SECTOR_SPAN_DEG", "SectorLayout", "UserDrop", "drop_users"]
