import pytest

from hbfsim.core.base import ConfigurationError
from hbfsim.harness.config import CampaignConfig
from hbfsim.harness.coverage import coverage_radius


def test_coverage_radius_meets_target():
    found = coverage_radius(CampaignConfig(), target_snr_db=5.0, coverage=0.95, samples=2000)
    assert CampaignConfig().min_distance < found.radius <= 1000.0
    assert found.achieved >= 0.95


def test_stricter_targets_shrink_the_cell():
    cfg = CampaignConfig()
    easy = coverage_radius(cfg, target_snr_db=0.0, samples=2000)
    hard = coverage_radius(cfg, target_snr_db=15.0, samples=2000)
    assert hard.radius <= easy.radius


def test_beamforming_gain_extends_coverage():
    cfg = CampaignConfig()
    plain = coverage_radius(cfg, target_snr_db=20.0, samples=2000)
    boosted = coverage_radius(cfg, target_snr_db=20.0, beamforming_gain_db=20.0, samples=2000)
    assert boosted.radius >= plain.radius


def test_coverage_is_deterministic_for_a_seed():
    cfg = CampaignConfig()
    assert coverage_radius(cfg, samples=1000, seed=3) == coverage_radius(cfg, samples=1000, seed=3)


def test_invalid_coverage_fraction():
    with pytest.raises(ConfigurationError):
        coverage_radius(CampaignConfig(), coverage=1.5)
