"""
Coverage-radius search.

The largest cell radius at which a given fraction of uniformly dropped users
reaches a target pre-beamforming SNR. The user population is drawn once as
unit-free samples (area fraction, sector offset, LOS and shadowing draws) and
rescaled for every trial radius, so coverage is evaluated on common random
numbers and the bisection is deterministic for a seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hbfsim.channel.model import fspl_db, los_probability
from hbfsim.core.base import COVERAGE_STREAM, ConfigurationError, derive_rng
from hbfsim.geometry.array import Role, element_gain
from hbfsim.geometry.layout import SECTOR_SPAN_DEG

from .config import CampaignConfig

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 4000
MAX_RADIUS_M = 1000.0
TOLERANCE_M = 0.5


@dataclass(frozen=True, slots=True)
class CoverageResult:
    radius: float
    achieved: float
    target_snr_db: float
    coverage: float


class _Population:
    def __init__(self, config: CampaignConfig, samples: int, seed: int) -> None:
        rng = derive_rng(seed, COVERAGE_STREAM)
        self.config = config
        self.profile = config.profile()
        self.area = rng.random(samples)
        self.offsets = rng.uniform(-SECTOR_SPAN_DEG / 2.0, SECTOR_SPAN_DEG / 2.0, samples)
        self.los_draws = rng.random(samples)
        self.shadow = rng.standard_normal(samples)

    def snr_db(self, radius: float, beamforming_gain_db: float) -> np.ndarray:
        cfg, profile = self.config, self.profile
        r0 = cfg.min_distance
        d2 = np.sqrt(self.area * (radius**2 - r0**2) + r0**2)
        dz = cfg.ue_height - cfg.tp_height
        d3 = np.sqrt(d2**2 + dz**2)
        if profile.los_mode == "always":
            los = np.ones(d2.shape, dtype=bool)
        elif profile.los_mode == "never":
            los = np.zeros(d2.shape, dtype=bool)
        else:
            los = self.los_draws < np.array([los_probability(float(d), profile) for d in d2])
        exponent = np.where(los, profile.pathloss_exponent_los, profile.pathloss_exponent_nlos)
        sigma = np.where(los, profile.shadow_sigma_los, profile.shadow_sigma_nlos)
        reference = fspl_db(1.0, cfg.carrier)
        loss = reference + 10.0 * exponent * np.log10(np.maximum(d3, 1.0)) + sigma * self.shadow
        loss = np.maximum(loss, reference + 20.0 * np.log10(np.maximum(d3, 1.0)))
        elevation = np.rad2deg(np.arctan2(dz, d2))
        tp_gain = element_gain(self.offsets, elevation, Role.TP, cfg.tp_array.element_gain_max)
        budget = cfg.budget()
        return (
            budget.transmit_power
            + tp_gain
            + cfg.ue_array.element_gain_max
            + beamforming_gain_db
            - loss
            - budget.noise_power
        )

    def covered(self, radius: float, target_snr_db: float, beamforming_gain_db: float) -> float:
        return float(np.mean(self.snr_db(radius, beamforming_gain_db) >= target_snr_db))


def coverage_radius(
    config: CampaignConfig,
    target_snr_db: float = 5.0,
    coverage: float = 0.95,
    beamforming_gain_db: float = 0.0,
    samples: int = DEFAULT_SAMPLES,
    seed: Optional[int] = None,
    *,
    max_radius: float = MAX_RADIUS_M,
    tolerance: float = TOLERANCE_M,
) -> CoverageResult:
    """Bisect the radius at which the covered fraction crosses ``coverage``."""
    if not 0.0 < coverage <= 1.0:
        raise ConfigurationError(f"coverage must be within (0, 1], got {coverage}.")
    if samples < 1:
        raise ConfigurationError(f"samples must be positive, got {samples}.")
    population = _Population(config, samples, config.seed if seed is None else seed)

    lo = config.min_distance * (1.0 + 1e-9)
    hi = max(max_radius, lo)
    at_lo = population.covered(lo, target_snr_db, beamforming_gain_db)
    if at_lo < coverage:
        logger.warning(f"Coverage target {coverage:.2f} not met even at {lo:.1f} m ({at_lo:.3f})")
        return CoverageResult(lo, at_lo, target_snr_db, coverage)
    at_hi = population.covered(hi, target_snr_db, beamforming_gain_db)
    if at_hi >= coverage:
        return CoverageResult(hi, at_hi, target_snr_db, coverage)

    achieved = at_lo
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        fraction = population.covered(mid, target_snr_db, beamforming_gain_db)
        if fraction >= coverage:
            lo, achieved = mid, fraction
        else:
            hi = mid
    logger.info(f"Coverage radius {lo:.1f} m at {achieved:.3f} covered (target SNR {target_snr_db} dB)")
    return CoverageResult(lo, achieved, target_snr_db, coverage)


__all__ = ["CoverageResult", "coverage_radius"]
