"""
Clustered narrowband MIMO channel generator.

Each TP-UE link is drawn in three steps: LOS state and large-scale path loss,
then cluster powers and angles, then per-ray polarization coupling and element
gains. The small-scale matrix is assembled at the carrier frequency as a sum
of rank-one ray terms; delays only show up as i.i.d. ray phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt

from hbfsim.core.base import DomainError, db_to_linear
from hbfsim.core.linalg import ComplexMatrix
from hbfsim.geometry.array import UraConfig, element_gain, spatial_phases

from .profiles import ChannelProfile

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True, slots=True)
class LinkGeometry:
    """Distances and line-of-sight angles of one TP-UE link (degrees, global frame)."""

    distance_2d: float
    distance_3d: float
    azimuth_dep: float
    elevation_dep: float
    azimuth_arr: float
    elevation_arr: float

    @classmethod
    def from_positions(
        cls,
        tp_position: Tuple[float, float],
        tp_height: float,
        ue_position: Tuple[float, float],
        ue_height: float,
    ) -> "LinkGeometry":
        dx = float(ue_position[0]) - float(tp_position[0])
        dy = float(ue_position[1]) - float(tp_position[1])
        dz = float(ue_height) - float(tp_height)
        d2 = float(np.hypot(dx, dy))
        d3 = float(np.sqrt(d2**2 + dz**2))
        azimuth = float(np.rad2deg(np.arctan2(dy, dx)))
        elevation = float(np.rad2deg(np.arctan2(dz, d2)))
        return cls(
            distance_2d=d2,
            distance_3d=d3,
            azimuth_dep=azimuth,
            elevation_dep=elevation,
            azimuth_arr=azimuth + 180.0 if azimuth < 0 else azimuth - 180.0,
            elevation_arr=-elevation,
        )


class Ray(NamedTuple):
    azimuth_dep: float
    elevation_dep: float
    azimuth_arr: float
    elevation_arr: float
    gain: complex
    coupling: npt.NDArray[np.complex128]
    los: bool


@dataclass(frozen=True, slots=True)
class RayBundle:
    """Rays of one link stored column-wise; indexing yields a :class:`Ray`."""

    azimuth_dep: npt.NDArray[np.float64]
    elevation_dep: npt.NDArray[np.float64]
    azimuth_arr: npt.NDArray[np.float64]
    elevation_arr: npt.NDArray[np.float64]
    gain: npt.NDArray[np.complex128]
    coupling: npt.NDArray[np.complex128]
    los: npt.NDArray[np.bool_]

    def __len__(self) -> int:
        return int(self.gain.size)

    def __getitem__(self, idx: int) -> Ray:
        return Ray(
            float(self.azimuth_dep[idx]),
            float(self.elevation_dep[idx]),
            float(self.azimuth_arr[idx]),
            float(self.elevation_arr[idx]),
            complex(self.gain[idx]),
            self.coupling[idx],
            bool(self.los[idx]),
        )


@dataclass(frozen=True, slots=True)
class ChannelRealization:
    """
    One link's small-scale matrix and large-scale loss.

    ``pattern_gain_linear`` is the element-pattern power divided out of ``H``
    when it is normalized; ``effective_path_loss`` folds it back in, so
    ``H / sqrt(effective_path_loss)`` is the physical channel.
    """

    H: ComplexMatrix
    path_loss_linear: float
    los: bool
    rays: RayBundle
    distance_3d: float = 0.0
    pattern_gain_linear: float = 1.0
    metadata: dict = field(default_factory=dict)

    @property
    def effective_path_loss(self) -> float:
        return self.path_loss_linear / self.pattern_gain_linear

    @property
    def path_loss_db(self) -> float:
        return float(10.0 * np.log10(self.path_loss_linear))


def fspl_db(distance: float, frequency_ghz: float) -> float:
    """Free-space loss ``20 log10(4 pi d f / c)``."""
    return float(20.0 * np.log10(4.0 * np.pi * distance * frequency_ghz * 1e9 / SPEED_OF_LIGHT))


def los_probability(distance: float, profile: ChannelProfile) -> float:
    if distance <= 0:
        raise DomainError(f"LOS probability needs a positive distance, got {distance}.")
    curve = profile.los_curve
    decay = np.exp(-distance / curve.d2)
    base = min(curve.d1 / distance, 1.0) * (1.0 - decay) + decay
    return float(np.clip(base**curve.exponent, 0.0, 1.0))


def path_loss_db(
    distance: float,
    los: bool,
    frequency: float,
    profile: ChannelProfile,
    rng: np.random.Generator,
) -> float:
    """Close-in path loss referenced to 1 m free space, plus log-normal shadowing."""
    if distance < 1.0:
        raise DomainError(f"Close-in path loss is defined for d >= 1 m, got {distance}.")
    exponent = profile.pathloss_exponent_los if los else profile.pathloss_exponent_nlos
    sigma = profile.shadow_sigma_los if los else profile.shadow_sigma_nlos
    shadow = float(rng.normal(0.0, sigma)) if sigma > 0 else 0.0
    return fspl_db(1.0, frequency) + 10.0 * exponent * np.log10(distance) + shadow


def _draw_los(distance: float, profile: ChannelProfile, rng: np.random.Generator) -> bool:
    draw = rng.random()
    if profile.los_mode == "always":
        return True
    if profile.los_mode == "never":
        return False
    return bool(draw < los_probability(distance, profile))


def _cluster_powers(profile: ChannelProfile, n_clusters: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    u = rng.random(n_clusters)
    shadow = rng.normal(0.0, profile.cluster_shadow_sigma, n_clusters) if profile.cluster_shadow_sigma > 0 else 0.0
    powers = np.power(u, profile.power_decay) * db_to_linear(-np.asarray(shadow))
    powers = np.sort(np.maximum(powers, np.finfo(float).tiny))[::-1]
    return powers / powers.sum()


def _polarization_coupling(
    profile: ChannelProfile, n_rays: int, rng: np.random.Generator
) -> npt.NDArray[np.complex128]:
    xpr_db = rng.normal(profile.xpr_mean, profile.xpr_sigma, n_rays) if profile.xpr_sigma > 0 else np.full(
        n_rays, profile.xpr_mean
    )
    cross = np.power(10.0, -xpr_db / 20.0)
    phases = np.exp(1j * rng.uniform(-np.pi, np.pi, (n_rays, 4)))
    coupling = np.empty((n_rays, 2, 2), dtype=np.complex128)
    coupling[:, 0, 0] = phases[:, 0]
    coupling[:, 0, 1] = cross * phases[:, 1]
    coupling[:, 1, 0] = cross * phases[:, 2]
    coupling[:, 1, 1] = phases[:, 3]
    return coupling


def generate_channel(
    tp_cfg: UraConfig,
    ue_cfg: UraConfig,
    geometry: LinkGeometry,
    profile: ChannelProfile,
    rng: np.random.Generator,
    *,
    carrier_ghz: float = 28.0,
    min_distance: float = 1.0,
    normalize: bool = True,
) -> ChannelRealization:
    """
    Draw one link realization ``H`` of shape ``(N_R, N_T)``.

    Draw order is fixed (LOS, path loss, cluster count, powers, angles,
    phases, polarization) so equal streams give bit-identical links.
    """
    if geometry.distance_2d < min_distance:
        raise DomainError(f"Link distance {geometry.distance_2d:.3f} m is below {min_distance} m.")

    los = _draw_los(geometry.distance_2d, profile, rng)
    loss_db = path_loss_db(geometry.distance_3d, los, carrier_ghz, profile, rng)
    loss_db = max(loss_db, fspl_db(geometry.distance_3d, carrier_ghz))

    counts = np.array(sorted(profile.cluster_count_distribution), dtype=int)
    probs = np.array([profile.cluster_count_distribution[c] for c in counts], dtype=float)
    n_clusters = int(rng.choice(counts, p=probs / probs.sum()))
    cluster_power = _cluster_powers(profile, n_clusters, rng)

    centre_offsets = rng.normal(0.0, 1.0, (4, n_clusters)) * np.array(
        [
            [profile.global_azimuth_spread_dep],
            [profile.global_elevation_spread_dep],
            [profile.global_azimuth_spread_arr],
            [profile.global_elevation_spread_arr],
        ]
    )
    if los:
        centre_offsets[:, 0] = 0.0
    n_per = profile.rays_per_cluster
    ray_offsets = rng.normal(0.0, 1.0, (4, n_clusters, n_per)) * np.array(
        [
            [[profile.cluster_azimuth_spread_dep]],
            [[profile.cluster_elevation_spread_dep]],
            [[profile.cluster_azimuth_spread_arr]],
            [[profile.cluster_elevation_spread_arr]],
        ]
    )
    los_angles = np.array(
        [geometry.azimuth_dep, geometry.elevation_dep, geometry.azimuth_arr, geometry.elevation_arr]
    )
    angles = (los_angles[:, None, None] + centre_offsets[:, :, None] + ray_offsets).reshape(4, -1)
    angles[1] = np.clip(angles[1], -90.0, 90.0)
    angles[3] = np.clip(angles[3], -90.0, 90.0)
    ray_power = np.repeat(cluster_power / n_per, n_per)
    ray_phase = np.exp(1j * rng.uniform(-np.pi, np.pi, ray_power.size))
    coupling = _polarization_coupling(profile, ray_power.size, rng)
    is_los = np.zeros(ray_power.size, dtype=bool)

    if los:
        k_factor = float(db_to_linear(profile.rician_k_los))
        ray_power = np.append(ray_power / (k_factor + 1.0), k_factor / (k_factor + 1.0))
        wavelength = SPEED_OF_LIGHT / (carrier_ghz * 1e9)
        los_phase = np.exp(-2j * np.pi * geometry.distance_3d / wavelength)
        ray_phase = np.append(ray_phase, los_phase)
        angles = np.column_stack((angles, los_angles))
        coupling = np.concatenate((coupling, np.array([[[1.0, 0.0], [0.0, -1.0]]], dtype=np.complex128)))
        is_los = np.append(is_los, True)

    gain_tp = element_gain(angles[0] - tp_cfg.boresight_azimuth, angles[1], tp_cfg.role, tp_cfg.element_gain_max)
    gain_ue = element_gain(angles[2] - ue_cfg.boresight_azimuth, angles[3], ue_cfg.role, ue_cfg.element_gain_max)
    pattern_power = db_to_linear(np.asarray(gain_tp) + np.asarray(gain_ue))
    pattern_gain = float(np.sum(ray_power * pattern_power)) if normalize else 1.0
    ray_gain = np.sqrt(ray_power * pattern_power / pattern_gain) * ray_phase

    sub = coupling[:, : ue_cfg.polarizations, : tp_cfg.polarizations]
    sub_norm = np.sqrt(np.sum(np.abs(sub) ** 2, axis=(1, 2)))
    a_tp = spatial_phases(tp_cfg, angles[0], angles[1]) / np.sqrt(tp_cfg.n_spatial)
    a_ue = spatial_phases(ue_cfg, angles[2], angles[3]) / np.sqrt(ue_cfg.n_spatial)
    scale = np.sqrt(tp_cfg.n_elements * ue_cfg.n_elements)
    blocks = []
    for p in range(ue_cfg.polarizations):
        row = []
        for q in range(tp_cfg.polarizations):
            weight = scale * ray_gain * sub[:, p, q] / sub_norm
            row.append((a_ue * weight) @ np.conj(a_tp).T)
        blocks.append(row)
    matrix = np.block(blocks)

    rays = RayBundle(
        azimuth_dep=angles[0],
        elevation_dep=angles[1],
        azimuth_arr=angles[2],
        elevation_arr=angles[3],
        gain=ray_gain,
        coupling=coupling,
        los=is_los,
    )
    return ChannelRealization(
        H=matrix,
        path_loss_linear=float(db_to_linear(loss_db)),
        los=los,
        rays=rays,
        distance_3d=geometry.distance_3d,
        pattern_gain_linear=pattern_gain,
        metadata={"clusters": n_clusters},
    )


__all__ = [
    "SPEED_OF_LIGHT",
    "LinkGeometry",
    "Ray",
    "RayBundle",
    "ChannelRealization",
    "fspl_db",
    "los_probability",
    "path_loss_db",
    "generate_channel",
]
