"""
Urban-micro street canyon regime with many weak clusters.

Values approximate the 3GPP UMi statistics at 28 GHz; they are calibration
defaults, not a bit-exact reproduction of any standard.
"""

from __future__ import annotations

from hbfsim.channel.profiles import ChannelProfile, LosCurve, register_profile


@register_profile
def many_weak_clusters() -> ChannelProfile:
    return ChannelProfile(
        name="many-weak-clusters",
        description="3GPP-like UMi: 12 to 19 clusters of 20 rays, mild power decay.",
        cluster_count_distribution={12: 0.5, 16: 0.25, 19: 0.25},
        rays_per_cluster=20,
        cluster_azimuth_spread_dep=3.0,
        cluster_azimuth_spread_arr=17.0,
        cluster_elevation_spread_dep=3.0,
        cluster_elevation_spread_arr=7.0,
        global_azimuth_spread_dep=12.0,
        global_azimuth_spread_arr=35.0,
        global_elevation_spread_dep=4.0,
        global_elevation_spread_arr=10.0,
        power_decay=1.1,
        cluster_shadow_sigma=3.0,
        los_curve=LosCurve(d1=18.0, d2=36.0, exponent=1.0),
        pathloss_exponent_los=2.1,
        pathloss_exponent_nlos=3.19,
        shadow_sigma_los=4.0,
        shadow_sigma_nlos=8.2,
        xpr_mean=9.0,
        xpr_sigma=3.0,
        rician_k_los=9.0,
    )
