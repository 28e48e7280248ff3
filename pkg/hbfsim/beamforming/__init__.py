"""
Public surface of the hybrid beamforming schemes.

Each scheme module exports a ``HANDLERS`` table mapping its identifier to a
function that designs every user's weights for one drop; the tables are
merged here and checked against the identifiers the CLI accepts.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List

from hbfsim.core.base import ConfigurationError

from .baseline import HANDLERS as BASELINE_HANDLERS
from .baseline import baseline_scheme
from .codebook import Codebooks, HybridWeights, build_codebooks, matched_filter, omp_combiner, rf_select_max
from .context import DropContext
from .gmr import HANDLERS as GMR_HANDLERS
from .gmr import gmr_scheme
from .lsp import HANDLERS as LSP_HANDLERS
from .lsp import lsp_scheme
from .slnr import HANDLERS as SLNR_HANDLERS
from .slnr import SlnrSolverState, slnr_scheme
from .zf import ZfRank, stack_effectives, zf_rank_check

SCHEME_IDS = ("baseline", "lsp", "slnr", "gmr")

SCHEME_HANDLERS: Dict[str, Callable[[DropContext], Dict[int, HybridWeights]]] = {}
for handler_set in (BASELINE_HANDLERS, LSP_HANDLERS, SLNR_HANDLERS, GMR_HANDLERS):
    SCHEME_HANDLERS.update(handler_set)

# Ensure we have handlers for every declared scheme
missing = sorted(set(SCHEME_IDS) - set(SCHEME_HANDLERS))
if missing:
    raise RuntimeError(f"No handlers registered for schemes: {missing}")


def resolve_schemes(names: Iterable[str] | str) -> List[str]:
    """Parse a comma-separated string or list of scheme ids, preserving order."""
    if isinstance(names, str):
        names = [part for part in names.split(",")]
    resolved: List[str] = []
    for raw in names:
        name = raw.strip().lower()
        if not name:
            continue
        if name not in SCHEME_HANDLERS:
            raise ConfigurationError(f"Unknown scheme '{name}'. Available: {list(SCHEME_IDS)}.")
        if name not in resolved:
            resolved.append(name)
    return resolved


__all__ = [
    "SCHEME_IDS",
    "SCHEME_HANDLERS",
    "resolve_schemes",
    "Codebooks",
    "HybridWeights",
    "DropContext",
    "SlnrSolverState",
    "ZfRank",
    "build_codebooks",
    "rf_select_max",
    "omp_combiner",
    "matched_filter",
    "baseline_scheme",
    "lsp_scheme",
    "slnr_scheme",
    "gmr_scheme",
    "zf_rank_check",
    "stack_effectives",
]
