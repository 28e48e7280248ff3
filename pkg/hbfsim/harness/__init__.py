"""Campaign harness: configuration, Monte Carlo runs, CDFs, reports and the CLI."""

from .campaign import (
    CampaignResult,
    CampaignRunner,
    SystemDrop,
    draw_drop,
    rank_within,
    run_campaign,
    simulate_drop,
    survey_eigenvalues,
)
from .cdf import CdfSeries, cdf
from .config import ArraySettings, CampaignConfig, apply_environment, build_config, load_config
from .coverage import CoverageResult, coverage_radius
from .report import SCHEMA_VERSION, emit_report, render_cdf_figure

__all__ = [
    "ArraySettings",
    "CampaignConfig",
    "CampaignResult",
    "CampaignRunner",
    "CdfSeries",
    "CoverageResult",
    "SCHEMA_VERSION",
    "SystemDrop",
    "apply_environment",
    "build_config",
    "cdf",
    "coverage_radius",
    "draw_drop",
    "emit_report",
    "load_config",
    "rank_within",
    "render_cdf_figure",
    "run_campaign",
    "simulate_drop",
    "survey_eigenvalues",
]
