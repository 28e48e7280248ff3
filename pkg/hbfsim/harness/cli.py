"""
Command-line entry point: ``python -m hbfsim simulate|eigen|coverage``.

Library modules only create loggers; :func:`main` is the single place that
configures handlers. Failures map to exit codes through the ``exit_code`` of
the raised :class:`~hbfsim.core.base.SimulationError` subclass.
"""

from __future__ import annotations

import argparse
import logging
import os
from pathlib import Path
from typing import List, Optional, Sequence

from hbfsim.beamforming import resolve_schemes
from hbfsim.core.base import SimulationError

from .campaign import run_campaign, survey_eigenvalues
from .config import LOG_LEVEL_ENV, CampaignConfig, apply_environment, load_config
from .coverage import coverage_radius
from .report import FLOAT_FORMAT, emit_report, render_cdf_figure, summary_frame

logger = logging.getLogger(__name__)

DEFAULT_OUT = "results"


def _base_config(args: argparse.Namespace) -> CampaignConfig:
    config = load_config(args.config) if args.config else CampaignConfig()
    return apply_environment(config)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON campaign config; defaults apply when omitted.")
    parser.add_argument("--seed", type=int, help="Override the campaign seed.")
    parser.add_argument("--realizations", type=int, help="Override the number of realizations.")
    parser.add_argument("--log-level", default=None, help=f"Logging level (default: ${LOG_LEVEL_ENV} or INFO).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hbfsim", description="Multi-cell mmWave hybrid beamforming simulator.")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Run a Monte Carlo campaign and write reports.")
    _add_common(simulate)
    simulate.add_argument("--schemes", help="Comma-separated scheme ids (baseline,lsp,slnr,gmr).")
    simulate.add_argument("--radius", type=float, help="Cell radius in meters.")
    simulate.add_argument("--users", type=int, help="Users per cell.")
    simulate.add_argument("--streams", type=int, help="Streams per user.")
    simulate.add_argument("--profile", help="Channel profile name.")
    simulate.add_argument("--workers", type=int, help="Worker processes.")
    simulate.add_argument("--out", type=Path, default=Path(DEFAULT_OUT), help="Output directory.")
    simulate.add_argument("--dump-channels", type=Path, help="Write every channel matrix to this file (.csv or binary).")
    simulate.add_argument("--plot", action="store_true", help="Also render cdf.png.")
    simulate.add_argument("--progress", action="store_true", help="Show a progress bar.")

    eigen = commands.add_parser("eigen", help="Survey eigenvalues of H H^H per channel profile.")
    _add_common(eigen)
    eigen.add_argument("--profiles", help="Comma-separated profile names; defaults to the config's profile.")
    eigen.add_argument("--out", type=Path, default=Path(DEFAULT_OUT), help="Output directory.")

    coverage = commands.add_parser("coverage", help="Find the radius meeting an SNR coverage target.")
    _add_common(coverage)
    coverage.add_argument("--target-snr", type=float, default=5.0, help="Target SNR in dB.")
    coverage.add_argument("--coverage", type=float, default=0.95, help="Required covered fraction.")
    coverage.add_argument("--bf-gain", type=float, default=0.0, help="Beamforming gain credited in dB.")
    coverage.add_argument("--samples", type=int, default=4000, help="Sampled user positions.")
    return parser


def _simulate(args: argparse.Namespace) -> int:
    config = _base_config(args).with_overrides(
        schemes=resolve_schemes(args.schemes) if args.schemes else None,
        cell_radius=args.radius,
        users_per_cell=args.users,
        streams_per_user=args.streams,
        realizations=args.realizations,
        seed=args.seed,
        channel_profile=args.profile,
        workers=args.workers,
    )
    result = run_campaign(config, dump_channels=args.dump_channels, progress=args.progress)
    emit_report(result, "csv", args.out)
    emit_report(result, "json", args.out)
    if args.plot:
        render_cdf_figure(result, args.out / "cdf.png")
    print(summary_frame(result).to_string(index=False, float_format=lambda v: FLOAT_FORMAT % v))
    return 0


def _eigen(args: argparse.Namespace) -> int:
    config = _base_config(args).with_overrides(realizations=args.realizations, seed=args.seed)
    profiles = [name.strip() for name in args.profiles.split(",") if name.strip()] if args.profiles else None
    survey = survey_eigenvalues(config, profiles)
    args.out.mkdir(parents=True, exist_ok=True)
    target = args.out / "eigen_survey.csv"
    survey.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote eigenvalue survey to {target}")
    eig_cols = [col for col in survey.columns if col.startswith("eig")] + ["rank20db"]
    print(survey.groupby("profile")[eig_cols].median().to_string())
    return 0


def _coverage(args: argparse.Namespace) -> int:
    config = _base_config(args).with_overrides(seed=args.seed)
    found = coverage_radius(
        config,
        target_snr_db=args.target_snr,
        coverage=args.coverage,
        beamforming_gain_db=args.bf_gain,
        samples=args.samples,
    )
    print(f"radius_m={found.radius:.1f} covered={found.achieved:.3f}")
    return 0


COMMANDS = {"simulate": _simulate, "eigen": _eigen, "coverage": _coverage}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    level = (args.log_level or os.getenv(LOG_LEVEL_ENV) or "INFO").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except SimulationError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except OSError as exc:
        logger.error(f"I/O failure: {exc}")
        return 3
    except Exception as exc:
        logger.exception(f"Unexpected failure: {exc}")
        return 1


__all__: List[str] = ["build_parser", "main"]
