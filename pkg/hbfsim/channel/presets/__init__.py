"""
Module import side-effects register channel profiles with the global registry.
"""

from importlib import import_module

_MODULES = [
    "hbfsim.channel.presets.many_weak_clusters",
    "hbfsim.channel.presets.few_strong_lobes",
]


for module_path in _MODULES:
    import_module(module_path)


__all__ = ["_MODULES"]
