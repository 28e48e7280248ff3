import os

import numpy as np
import pytest

from hbfsim.channel.model import ChannelRealization, RayBundle
from hbfsim.channel.profiles import ChannelProfile, LosCurve
from hbfsim.geometry.array import Role, UraConfig
from hbfsim.harness.config import ArraySettings, CampaignConfig

SLOW_ENV = "HBFSIM_RUN_SLOW"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-scale Monte Carlo checks, run with HBFSIM_RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv(SLOW_ENV) == "1":
        return
    skip_slow = pytest.mark.skip(reason=f"set {SLOW_ENV}=1 to run slow Monte Carlo checks")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_tp():
    return UraConfig(rows=2, cols=4, polarizations=1, element_gain_max=8.0, role=Role.TP)


@pytest.fixture
def small_ue():
    return UraConfig(rows=2, cols=2, polarizations=1, role=Role.UE)


@pytest.fixture
def single_ray_profile():
    """One cluster of one ray, no spreads, no shadowing and never LOS."""
    return ChannelProfile(
        name="single-ray",
        cluster_count_distribution={1: 1.0},
        rays_per_cluster=1,
        cluster_azimuth_spread_dep=0.0,
        cluster_azimuth_spread_arr=0.0,
        cluster_elevation_spread_dep=0.0,
        cluster_elevation_spread_arr=0.0,
        global_azimuth_spread_dep=0.0,
        global_azimuth_spread_arr=0.0,
        global_elevation_spread_dep=0.0,
        global_elevation_spread_arr=0.0,
        power_decay=1.0,
        cluster_shadow_sigma=0.0,
        los_curve=LosCurve(),
        pathloss_exponent_los=2.0,
        pathloss_exponent_nlos=2.0,
        shadow_sigma_los=0.0,
        shadow_sigma_nlos=0.0,
        xpr_sigma=0.0,
        los_mode="never",
    )


@pytest.fixture
def make_link():
    """Factory wrapping a bare matrix into a ray-less channel realization."""

    def _make(H, path_loss=1.0, los=False):
        empty = np.zeros(0)
        rays = RayBundle(
            azimuth_dep=empty,
            elevation_dep=empty,
            azimuth_arr=empty,
            elevation_arr=empty,
            gain=np.zeros(0, dtype=np.complex128),
            coupling=np.zeros((0, 2, 2), dtype=np.complex128),
            los=np.zeros(0, dtype=bool),
        )
        return ChannelRealization(
            H=np.asarray(H, dtype=np.complex128), path_loss_linear=float(path_loss), los=los, rays=rays
        )

    return _make


@pytest.fixture
def tiny_config():
    """Full pipeline on small arrays: quick enough for every unit run."""
    return CampaignConfig(
        tp_array=ArraySettings(rows=2, cols=4, polarizations=2, element_gain_max=8.0),
        ue_array=ArraySettings(rows=2, cols=2, polarizations=2),
        users_per_cell=3,
        realizations=2,
        seed=7,
    )
