"""
hbfsim - multi-cell mmWave hybrid beamforming simulator.

Geometry and channel generation feed four precoder/combiner designs
(baseline, LSP, SLNR, GMR); the harness runs Monte Carlo campaigns over them
and reports spectral-efficiency CDFs.
"""

from hbfsim.beamforming import SCHEME_IDS
from hbfsim.channel import get_profile
from hbfsim.core.base import SimulationError
from hbfsim.harness import CampaignConfig, emit_report, load_config, run_campaign

__version__ = "0.1.0"

__all__ = [
    "SCHEME_IDS",
    "CampaignConfig",
    "SimulationError",
    "emit_report",
    "get_profile",
    "load_config",
    "run_campaign",
]
