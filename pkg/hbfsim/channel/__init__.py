"""Clustered channel generator, named profiles and channel dumps."""

from .profiles import ChannelProfile, LosCurve, get_profile, register_profile, registry
from . import presets  # noqa: F401  registers the built-in profiles
from .model import (
    ChannelRealization,
    LinkGeometry,
    Ray,
    RayBundle,
    fspl_db,
    generate_channel,
    los_probability,
    path_loss_db,
)
from .dump import read_channel_dump, write_channel_dump

__all__ = [
    "ChannelProfile",
    "LosCurve",
    "get_profile",
    "register_profile",
    "registry",
    "ChannelRealization",
    "LinkGeometry",
    "Ray",
    "RayBundle",
    "fspl_db",
    "generate_channel",
    "los_probability",
    "path_loss_db",
    "read_channel_dump",
    "write_channel_dump",
]
