"""
Urban-micro regime with a few strong spatial lobes.

At most five lobes, steep inter-lobe power decay and tight intra-lobe
spreads, so the channel rank is typically two.
"""

from __future__ import annotations

from hbfsim.channel.profiles import ChannelProfile, LosCurve, register_profile

MAX_LOBES = 5


@register_profile
def few_strong_lobes() -> ChannelProfile:
    return ChannelProfile(
        name="few-strong-lobes",
        description="NYUSIM-like UMi: 1 to 5 spatial lobes of 6 subpaths, steep power decay.",
        cluster_count_distribution={1: 0.4, 2: 0.3, 3: 0.15, 4: 0.1, MAX_LOBES: 0.05},
        rays_per_cluster=6,
        cluster_azimuth_spread_dep=2.0,
        cluster_azimuth_spread_arr=5.0,
        cluster_elevation_spread_dep=1.5,
        cluster_elevation_spread_arr=3.0,
        global_azimuth_spread_dep=20.0,
        global_azimuth_spread_arr=40.0,
        global_elevation_spread_dep=4.0,
        global_elevation_spread_arr=8.0,
        power_decay=6.0,
        cluster_shadow_sigma=3.0,
        los_curve=LosCurve(d1=22.0, d2=100.0, exponent=2.0),
        pathloss_exponent_los=2.0,
        pathloss_exponent_nlos=3.2,
        shadow_sigma_los=4.0,
        shadow_sigma_nlos=7.0,
        xpr_mean=9.0,
        xpr_sigma=3.0,
        rician_k_los=12.0,
        metadata={"max_lobes": MAX_LOBES},
    )
