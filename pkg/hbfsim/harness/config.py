"""
Campaign configuration schema and loader.

Configs are JSON files whose keys mirror :class:`CampaignConfig`; every field
has a default taken from the reference system parameters, so a file only
needs to name what it changes. ``HBFSIM_WORKERS`` in the environment (or a
``.env`` file) overrides the worker count.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from hbfsim.beamforming import SCHEME_IDS, resolve_schemes
from hbfsim.channel.profiles import ChannelProfile, get_profile
from hbfsim.core.base import ConfigurationError
from hbfsim.geometry.array import Role, UraConfig
from hbfsim.geometry.layout import SectorLayout
from hbfsim.metrics import LinkBudget

load_dotenv()  # Load environment variables from .env file

logger = logging.getLogger(__name__)

WORKERS_ENV = "HBFSIM_WORKERS"
LOG_LEVEL_ENV = "HBFSIM_LOG_LEVEL"


class ArraySettings(BaseModel):
    """Input schema for one uniform rectangular array."""

    rows: int = Field(ge=1, description="Element rows (elevation axis).")
    cols: int = Field(ge=1, description="Element columns (azimuth axis).")
    polarizations: int = Field(2, ge=1, le=2, description="1 for single, 2 for dual-slant polarization.")
    spacing_azimuth: float = Field(0.5, gt=0, description="Column spacing in wavelengths.")
    spacing_elevation: float = Field(1.0, gt=0, description="Row spacing in wavelengths.")
    element_gain_max: float = Field(0.0, description="Peak element gain in dBi.")

    def to_ura(self, role: Role, boresight_azimuth: float = 0.0) -> UraConfig:
        return UraConfig(
            rows=self.rows,
            cols=self.cols,
            polarizations=self.polarizations,
            spacing_azimuth=self.spacing_azimuth,
            spacing_elevation=self.spacing_elevation,
            boresight_azimuth=boresight_azimuth,
            element_gain_max=self.element_gain_max,
            role=role,
        )


def _default_tp_array() -> ArraySettings:
    return ArraySettings(rows=8, cols=16, polarizations=2, element_gain_max=8.0)


def _default_ue_array() -> ArraySettings:
    return ArraySettings(rows=2, cols=2, polarizations=2, element_gain_max=0.0)


class CampaignConfig(BaseModel):
    """Every parameter of a Monte Carlo campaign."""

    carrier: float = Field(28.0, gt=0, description="Carrier frequency in GHz.")
    bandwidth: float = Field(100e6, gt=0, description="Bandwidth in Hz.")
    tx_power: float = Field(35.2, description="Transmit power per user in dBm.")
    noise_figure: float = Field(10.0, ge=0, description="Receiver noise figure in dB.")
    cell_radius: float = Field(50.0, gt=0, description="Cell radius in meters.")
    min_distance: float = Field(10.0, gt=0, description="Minimum TP-UE ground distance in meters.")
    tp_height: float = Field(10.0, ge=0, description="TP antenna height in meters.")
    ue_height: float = Field(1.5, ge=0, description="UE antenna height in meters.")
    users_per_cell: int = Field(3, ge=1, description="Users served per cell (K).")
    streams_per_user: int = Field(2, ge=1, description="Data streams per user (N_S).")
    tp_chains_per_user: int = Field(4, ge=1, description="TP RF chains per user (M_T^RF).")
    ue_chains: int = Field(4, ge=1, description="UE RF chains (N_R^RF).")
    tp_array: ArraySettings = Field(default_factory=_default_tp_array, description="TP array per sector.")
    ue_array: ArraySettings = Field(default_factory=_default_ue_array, description="UE array.")
    channel_profile: str = Field("few-strong-lobes", description="Registered channel profile name.")
    profile_overrides: Dict[str, Any] = Field(
        default_factory=dict, description="Scalar profile fields to replace, e.g. {'los_mode': 'never'}."
    )
    schemes: Optional[List[str]] = Field(
        None, description="Scheme ids to evaluate; omitted means every scheme the dimensions allow."
    )
    realizations: int = Field(50, ge=1, description="Number of Monte Carlo drops.")
    seed: int = Field(2018, ge=0, description="Campaign seed.")
    workers: int = Field(1, ge=1, description="Worker processes; results do not depend on it.")

    model_config = {"extra": "forbid"}

    @field_validator("schemes")
    @classmethod
    def _known_schemes(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return None
        try:
            return resolve_schemes(value)
        except ConfigurationError as exc:
            raise ValueError(str(exc)) from exc

    @model_validator(mode="after")
    def _consistent_dimensions(self) -> "CampaignConfig":
        if self.streams_per_user > min(self.tp_chains_per_user, self.ue_chains):
            raise ValueError(
                f"streams_per_user ({self.streams_per_user}) must not exceed "
                f"min(tp_chains_per_user, ue_chains) = {min(self.tp_chains_per_user, self.ue_chains)}."
            )
        if self.ue_chains > self.ue_array.rows * self.ue_array.cols * self.ue_array.polarizations:
            raise ValueError("ue_chains cannot exceed the UE element count.")
        if self.min_distance >= self.cell_radius:
            raise ValueError("min_distance must be smaller than cell_radius.")
        return self

    @property
    def schemes_explicit(self) -> bool:
        return self.schemes is not None

    def active_schemes(self) -> List[str]:
        """
        Schemes a campaign will run.

        GMR needs ``N_S == N_R^RF``: asking for it explicitly otherwise is a
        configuration error, while the implicit default silently leaves it out.
        """
        requested = list(self.schemes) if self.schemes is not None else list(SCHEME_IDS)
        if "gmr" in requested and self.streams_per_user != self.ue_chains:
            if self.schemes_explicit:
                raise ConfigurationError(
                    f"gmr requires streams_per_user == ue_chains, got {self.streams_per_user} and {self.ue_chains}."
                )
            logger.info(f"Skipping gmr: {self.streams_per_user} streams with {self.ue_chains} UE RF chains")
            requested.remove("gmr")
        if not requested:
            raise ConfigurationError("At least one scheme must be selected.")
        return requested

    def layout(self) -> SectorLayout:
        return SectorLayout(
            cell_radius=self.cell_radius,
            min_distance=self.min_distance,
            tp_height=self.tp_height,
            ue_height=self.ue_height,
        )

    def budget(self) -> LinkBudget:
        return LinkBudget(
            transmit_power=self.tx_power,
            noise_figure=self.noise_figure,
            bandwidth=self.bandwidth,
            carrier=self.carrier,
        )

    def profile(self) -> ChannelProfile:
        return get_profile(self.channel_profile, self.profile_overrides)

    def tp_ura(self, boresight_azimuth: float = 0.0) -> UraConfig:
        return self.tp_array.to_ura(Role.TP, boresight_azimuth)

    def ue_ura(self, boresight_azimuth: float = 0.0) -> UraConfig:
        return self.ue_array.to_ura(Role.UE, boresight_azimuth)

    def with_overrides(self, **overrides: Any) -> "CampaignConfig":
        """Copy with non-``None`` overrides applied and the result revalidated."""
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        return build_config(data)


def build_config(data: Dict[str, Any]) -> CampaignConfig:
    try:
        return CampaignConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid campaign configuration: {exc}") from exc


def load_config(path: Union[str, Path]) -> CampaignConfig:
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"Cannot read config {source}: {exc}") from exc
    try:
        config = CampaignConfig.model_validate_json(text)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid campaign configuration in {source}: {exc}") from exc
    config.profile()
    return config


def apply_environment(config: CampaignConfig) -> CampaignConfig:
    """Apply ``HBFSIM_WORKERS`` when set."""
    workers = os.getenv(WORKERS_ENV)
    if not workers:
        return config
    try:
        return config.with_overrides(workers=int(workers))
    except ValueError as exc:
        raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got '{workers}'.") from exc


__all__ = [
    "WORKERS_ENV",
    "LOG_LEVEL_ENV",
    "ArraySettings",
    "CampaignConfig",
    "build_config",
    "load_config",
    "apply_environment",
]
