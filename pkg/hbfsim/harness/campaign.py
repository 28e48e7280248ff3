"""
Monte Carlo campaign orchestration.

One task per realization: drop users, draw every TP-UE channel, design the
weights of each requested scheme and evaluate every user. Each task derives
its random streams from ``(seed, realization)`` alone, and results are merged
in realization order, so the output does not depend on the worker count.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from hbfsim.beamforming import (
    SCHEME_HANDLERS,
    DropContext,
    HybridWeights,
    ZfRank,
    build_codebooks,
    stack_effectives,
    zf_rank_check,
)
from hbfsim.channel.dump import DumpEntry, write_channel_dump
from hbfsim.channel.model import ChannelRealization, LinkGeometry, generate_channel
from hbfsim.core.base import LAYOUT_STREAM, LINK_STREAM, derive_rng
from hbfsim.geometry.layout import UserDrop, drop_users
from hbfsim.metrics import UserResult, eigenvalue_profile, user_result

from .config import CampaignConfig

logger = logging.getLogger(__name__)

EIGENVALUES_KEPT = 4
RANK_WINDOW_DB = 20.0


@dataclass
class SystemDrop:
    """All positions, channels and per-scheme weights of one realization."""

    index: int
    users: UserDrop
    channels: Dict[Tuple[int, int], ChannelRealization]
    context: DropContext
    weights: Dict[str, Dict[int, HybridWeights]] = field(default_factory=dict)

    @property
    def channel_count(self) -> int:
        return len(self.channels)


@dataclass
class DropOutcome:
    index: int
    records: List[UserResult]
    channel_count: int
    zf: ZfRank
    dumped: List[DumpEntry] = field(default_factory=list)


@dataclass
class CampaignResult:
    config: CampaignConfig
    schemes: List[str]
    by_scheme: Dict[str, List[UserResult]]
    channel_matrices: int
    zf: List[ZfRank]
    elapsed_seconds: float = 0.0

    def __getitem__(self, scheme: str) -> List[UserResult]:
        return self.by_scheme[scheme]

    @property
    def records(self) -> List[UserResult]:
        return [record for scheme in self.schemes for record in self.by_scheme[scheme]]

    def values(self, scheme: str, metric: str = "spectral_efficiency") -> np.ndarray:
        return np.array([getattr(record, metric) for record in self.by_scheme[scheme]], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.as_record() for record in self.records])

    @property
    def zf_invertible_fraction(self) -> float:
        if not self.zf:
            return 0.0
        return float(np.mean([rank.invertible for rank in self.zf]))


def draw_drop(config: CampaignConfig, drop: int) -> SystemDrop:
    """Place users and draw all ``K*L*L`` links of one realization."""
    layout = config.layout()
    profile = config.profile()
    budget = config.budget()
    users = drop_users(layout, config.users_per_cell, derive_rng(config.seed, drop, LAYOUT_STREAM))
    tp_arrays = [config.tp_ura(boresight) for boresight in layout.sector_boresights]
    # UE arrays face the site
    ue_arrays = [config.ue_ura(azimuth + 180.0) for azimuth in users.azimuths]

    channels: Dict[Tuple[int, int], ChannelRealization] = {}
    for user in range(users.n_users):
        for tp in range(layout.n_cells):
            geometry = LinkGeometry.from_positions(
                layout.site_position, layout.tp_height, users.positions[user], layout.ue_height
            )
            channels[(user, tp)] = generate_channel(
                tp_arrays[tp],
                ue_arrays[user],
                geometry,
                profile,
                derive_rng(config.seed, drop, LINK_STREAM, tp, user),
                carrier_ghz=config.carrier,
                min_distance=layout.min_distance,
            )
    codebooks = {
        user: build_codebooks(channels[(user, int(cell))], tp_arrays[int(cell)], ue_arrays[user])
        for user, cell in enumerate(users.cells)
    }
    context = DropContext(
        channels=channels,
        user_cells=[int(cell) for cell in users.cells],
        codebooks=codebooks,
        tx_power_w=budget.tx_power_w,
        noise_w=budget.noise_w,
        n_streams=config.streams_per_user,
        tx_chains=config.tp_chains_per_user,
        rx_chains=config.ue_chains,
    )
    return SystemDrop(index=drop, users=users, channels=channels, context=context)


def simulate_drop(
    config: CampaignConfig, drop: int, schemes: Sequence[str], keep_channels: bool = False
) -> DropOutcome:
    system = draw_drop(config, drop)
    channels, context = system.channels, system.context
    budget = config.budget()
    n_eig = min(EIGENVALUES_KEPT, config.ue_array.rows * config.ue_array.cols * config.ue_array.polarizations)
    eigenvalues = {user: eigenvalue_profile(context.desired(user).H, n_eig) for user in context.users}

    records: List[UserResult] = []
    for scheme in schemes:
        weights = SCHEME_HANDLERS[scheme](context)
        system.weights[scheme] = weights
        for user in context.users:
            records.append(
                user_result(
                    drop=drop,
                    scheme=scheme,
                    seed=config.seed,
                    target=user,
                    weights=weights,
                    channels=channels,
                    budget=budget,
                    user_cells=context.user_cells,
                    eigenvalues=eigenvalues[user],
                )
            )
    zf = zf_rank_check(stack_effectives(context, tx_user=0))
    dumped = [(drop, tp, user, link) for (user, tp), link in sorted(channels.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    logger.debug(f"Drop {drop}: {len(records)} records, {len(channels)} channels")
    return DropOutcome(
        index=drop,
        records=records,
        channel_count=len(channels),
        zf=zf,
        dumped=dumped if keep_channels else [],
    )


class CampaignRunner:
    """Runs realizations serially or on a process pool and merges them in order."""

    def __init__(self, config: CampaignConfig, workers: Optional[int] = None, enable_logging: bool = True) -> None:
        self.config = config
        self.workers = workers or config.workers
        self.enable_logging = enable_logging
        self.schemes = config.active_schemes()

    def outcomes(self, keep_channels: bool = False, progress: bool = False) -> Iterator[DropOutcome]:
        task = partial(simulate_drop, self.config, schemes=self.schemes, keep_channels=keep_channels)
        drops: Iterable[int] = range(self.config.realizations)
        if self.workers <= 1:
            stream: Iterable[DropOutcome] = map(task, drops)
            yield from self._with_progress(stream, progress)
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            yield from self._with_progress(pool.map(task, drops), progress)

    def _with_progress(self, stream: Iterable[DropOutcome], progress: bool) -> Iterable[DropOutcome]:
        if not progress:
            return stream
        from tqdm import tqdm

        return tqdm(stream, total=self.config.realizations, desc="realizations", leave=False)

    def run(self, dump_channels: Optional[Union[str, Path]] = None, progress: bool = False) -> CampaignResult:
        started = time.perf_counter()
        if self.enable_logging:
            logger.info(
                f"Campaign: {self.config.realizations} realizations, K={self.config.users_per_cell}, "
                f"N_S={self.config.streams_per_user}, profile={self.config.channel_profile}, "
                f"schemes={self.schemes}, workers={self.workers}"
            )
        collected: List[DropOutcome] = []

        def _entries() -> Iterator[DumpEntry]:
            for outcome in self.outcomes(keep_channels=True, progress=progress):
                collected.append(outcome)
                yield from outcome.dumped
                outcome.dumped = []

        if dump_channels is not None:
            write_channel_dump(dump_channels, _entries())
        else:
            collected.extend(self.outcomes(progress=progress))

        by_scheme: Dict[str, List[UserResult]] = {scheme: [] for scheme in self.schemes}
        for outcome in collected:
            for record in outcome.records:
                by_scheme[record.scheme].append(record)
        result = CampaignResult(
            config=self.config,
            schemes=list(self.schemes),
            by_scheme=by_scheme,
            channel_matrices=sum(outcome.channel_count for outcome in collected),
            zf=[outcome.zf for outcome in collected],
            elapsed_seconds=time.perf_counter() - started,
        )
        if self.enable_logging:
            logger.info(
                f"Campaign finished: {result.channel_matrices} channel matrices, "
                f"{len(result.records)} records in {result.elapsed_seconds:.1f} s"
            )
        return result


def run_campaign(
    config: CampaignConfig,
    *,
    workers: Optional[int] = None,
    dump_channels: Optional[Union[str, Path]] = None,
    progress: bool = False,
) -> CampaignResult:
    return CampaignRunner(config, workers=workers).run(dump_channels=dump_channels, progress=progress)


def rank_within(eigenvalues: np.ndarray, window_db: float = RANK_WINDOW_DB) -> int:
    """Count of eigenvalues within ``window_db`` of the largest."""
    values = np.asarray(eigenvalues, dtype=float)
    if values.size == 0 or values[0] <= 0:
        return 0
    return int(np.count_nonzero(values >= values[0] * 10.0 ** (-window_db / 10.0)))


def _survey_drop(config: CampaignConfig, drop: int) -> List[Dict[str, float]]:
    layout = config.layout()
    profile = config.profile()
    users = drop_users(layout, config.users_per_cell, derive_rng(config.seed, drop, LAYOUT_STREAM))
    n_rx = config.ue_array.rows * config.ue_array.cols * config.ue_array.polarizations
    rows: List[Dict[str, float]] = []
    for user, cell in enumerate(users.cells):
        cell = int(cell)
        geometry = LinkGeometry.from_positions(
            layout.site_position, layout.tp_height, users.positions[user], layout.ue_height
        )
        link = generate_channel(
            config.tp_ura(layout.sector_boresights[cell]),
            config.ue_ura(users.azimuths[user] + 180.0),
            geometry,
            profile,
            derive_rng(config.seed, drop, LINK_STREAM, cell, user),
            carrier_ghz=config.carrier,
            min_distance=layout.min_distance,
        )
        full = eigenvalue_profile(link.H, n_rx)
        row: Dict[str, float] = {"realization": drop, "cell": cell, "user": user, "los": link.los}
        for idx, value in enumerate(full[:EIGENVALUES_KEPT], start=1):
            row[f"eig{idx}"] = float(value)
        row["rank20db"] = rank_within(full)
        rows.append(row)
    return rows


def survey_eigenvalues(config: CampaignConfig, profiles: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    Eigenvalues of ``H H^H`` for every desired link, without beamforming.

    Desired links use the same stream keys as in :func:`run_campaign`, so the
    survey of a config matches the eigenvalues its campaign records carry.
    """
    frames = []
    for name in profiles or [config.channel_profile]:
        scoped = config.with_overrides(channel_profile=name)
        rows = [row for drop in range(scoped.realizations) for row in _survey_drop(scoped, drop)]
        frame = pd.DataFrame(rows)
        frame.insert(0, "profile", name)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


__all__ = [
    "SystemDrop",
    "DropOutcome",
    "CampaignResult",
    "CampaignRunner",
    "draw_drop",
    "simulate_drop",
    "run_campaign",
    "rank_within",
    "survey_eigenvalues",
]
