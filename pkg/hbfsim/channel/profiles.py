"""
Channel profile definitions and their registry.

A profile bundles every statistical knob of the clustered generator. Built-in
profiles live in :mod:`hbfsim.channel.presets` and register themselves on
import through :func:`register_profile`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Dict, Mapping

import numpy as np

from hbfsim.core.base import ConfigurationError
from hbfsim.core.registry import Registry

LOS_MODES = ("probabilistic", "always", "never")


@dataclass(frozen=True, slots=True)
class LosCurve:
    """``P_LOS(d) = (min(d1/d, 1)(1 - e^{-d/d2}) + e^{-d/d2})^exponent``."""

    d1: float = 18.0
    d2: float = 36.0
    exponent: float = 1.0


@dataclass(frozen=True, slots=True)
class ChannelProfile:
    """Immutable parameter set for the clustered channel generator."""

    name: str
    cluster_count_distribution: Mapping[int, float]
    rays_per_cluster: int
    cluster_azimuth_spread_dep: float
    cluster_azimuth_spread_arr: float
    cluster_elevation_spread_dep: float
    cluster_elevation_spread_arr: float
    global_azimuth_spread_dep: float
    global_azimuth_spread_arr: float
    global_elevation_spread_dep: float
    global_elevation_spread_arr: float
    power_decay: float
    cluster_shadow_sigma: float
    los_curve: LosCurve
    pathloss_exponent_los: float
    pathloss_exponent_nlos: float
    shadow_sigma_los: float
    shadow_sigma_nlos: float
    xpr_mean: float = 9.0
    xpr_sigma: float = 3.0
    rician_k_los: float = 9.0
    los_mode: str = "probabilistic"
    description: str = ""
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.cluster_count_distribution:
            raise ConfigurationError(f"Profile '{self.name}' has an empty cluster count distribution.")
        counts = np.array(list(self.cluster_count_distribution), dtype=int)
        probs = np.array(list(self.cluster_count_distribution.values()), dtype=float)
        if np.any(counts < 1) or np.any(probs < 0) or not np.isclose(probs.sum(), 1.0, atol=1e-9):
            raise ConfigurationError(
                f"Profile '{self.name}' needs cluster counts >= 1 with probabilities summing to 1."
            )
        if self.rays_per_cluster < 1:
            raise ConfigurationError(f"Profile '{self.name}' needs at least one ray per cluster.")
        non_negative = (
            "cluster_azimuth_spread_dep",
            "cluster_azimuth_spread_arr",
            "cluster_elevation_spread_dep",
            "cluster_elevation_spread_arr",
            "global_azimuth_spread_dep",
            "global_azimuth_spread_arr",
            "global_elevation_spread_dep",
            "global_elevation_spread_arr",
            "power_decay",
            "cluster_shadow_sigma",
            "shadow_sigma_los",
            "shadow_sigma_nlos",
            "xpr_sigma",
        )
        negative = [name for name in non_negative if getattr(self, name) < 0]
        if negative:
            raise ConfigurationError(f"Profile '{self.name}' has negative spreads/sigmas: {negative}.")
        if self.los_mode not in LOS_MODES:
            raise ConfigurationError(f"los_mode must be one of {LOS_MODES}, got '{self.los_mode}'.")
        if self.los_curve.d1 <= 0 or self.los_curve.d2 <= 0 or self.los_curve.exponent <= 0:
            raise ConfigurationError(f"Profile '{self.name}' has a non-positive LOS curve parameter.")

    def with_overrides(self, **overrides: Any) -> "ChannelProfile":
        """Copy with scalar fields replaced; unknown keys are configuration errors."""
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"Unknown channel profile fields: {unknown}.")
        if "los_curve" in overrides and isinstance(overrides["los_curve"], Mapping):
            overrides = dict(overrides, los_curve=LosCurve(**overrides["los_curve"]))
        if "cluster_count_distribution" in overrides:
            dist = overrides["cluster_count_distribution"]
            overrides = dict(overrides, cluster_count_distribution={int(k): float(v) for k, v in dist.items()})
        return replace(self, **overrides)


registry: Registry[ChannelProfile] = Registry("channel profile")


def register_profile(factory: Callable[[], ChannelProfile]) -> Callable[[], ChannelProfile]:
    """Decorator for preset modules to register their profile."""

    registry.register_from_factory(factory)
    return factory


def get_profile(name: str, overrides: Dict[str, Any] | None = None) -> ChannelProfile:
    try:
        profile = registry.get(name)
    except KeyError as exc:
        raise ConfigurationError(f"{exc.args[0]} Available: {registry.names()}.") from exc
    return profile.with_overrides(**(overrides or {}))


__all__ = [
    "LOS_MODES",
    "LosCurve",
    "ChannelProfile",
    "registry",
    "register_profile",
    "get_profile",
]
