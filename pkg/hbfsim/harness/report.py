"""
Report emission for campaign results.

Schema version 1, written into every ``summary.*``:

* ``cdf_<scheme>.csv``: ``value,probability``
* ``powers.csv``: ``scheme,mean_signal_w,mean_interference_w,mean_signal_dbm,mean_interference_dbm``
* ``eigenvalues.csv``: ``realization,cell,user,eig1..eig4`` (csv format only)
* ``summary.csv``: ``scheme,p10,p50,p90,p95,mean,count`` (csv format)
* ``summary.json``: schema version, config, counts, per-scheme percentiles (json format)

Floats are written with 12 significant digits and JSON keys are sorted, so
identical results give byte-identical files.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from hbfsim.core.base import ConfigurationError, ReportError, watts_to_dbm

from .campaign import CampaignResult
from .cdf import CdfSeries, cdf

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.12g"
FORMATS = ("csv", "json")

PathLike = Union[str, Path]


def _round(value: float) -> float:
    return float(FLOAT_FORMAT % value)


def scheme_cdfs(result: CampaignResult) -> Dict[str, CdfSeries]:
    return {scheme: cdf(result.values(scheme)) for scheme in result.schemes}


def summary_frame(result: CampaignResult) -> pd.DataFrame:
    rows = []
    for scheme, series in scheme_cdfs(result).items():
        rows.append({"scheme": scheme, **series.summary()})
    return pd.DataFrame(rows, columns=["scheme", "p10", "p50", "p90", "p95", "mean", "count"])


def powers_frame(result: CampaignResult) -> pd.DataFrame:
    rows = []
    for scheme in result.schemes:
        signal = float(np.mean(result.values(scheme, "signal_power")))
        interference = float(np.mean(result.values(scheme, "interference_power")))
        with np.errstate(divide="ignore"):
            rows.append(
                {
                    "scheme": scheme,
                    "mean_signal_w": signal,
                    "mean_interference_w": interference,
                    "mean_signal_dbm": float(watts_to_dbm(signal)),
                    "mean_interference_dbm": float(watts_to_dbm(interference)),
                }
            )
    return pd.DataFrame(rows)


def eigenvalue_frame(result: CampaignResult) -> pd.DataFrame:
    if not result.schemes:
        return pd.DataFrame()
    frame = pd.DataFrame([record.as_record() for record in result[result.schemes[0]]])
    eig_cols = [col for col in frame.columns if col.startswith("eig")]
    return frame.rename(columns={"drop": "realization"})[["realization", "cell", "user", *eig_cols]]


def _summary_payload(result: CampaignResult) -> Dict[str, Any]:
    schemes: Dict[str, Any] = {}
    for scheme, series in scheme_cdfs(result).items():
        stats = {key: (_round(value) if key != "count" else value) for key, value in series.summary().items()}
        records = result[scheme]
        stats["regularized"] = sum(record.regularized for record in records)
        stats["unconverged"] = sum(not record.converged for record in records)
        stats["mean_signal_w"] = _round(float(np.mean(result.values(scheme, "signal_power"))))
        stats["mean_interference_w"] = _round(float(np.mean(result.values(scheme, "interference_power"))))
        schemes[scheme] = stats
    return {
        "schema_version": SCHEMA_VERSION,
        "config": result.config.model_dump(mode="json"),
        "channel_matrices": result.channel_matrices,
        "records": len(result.records),
        "schemes": schemes,
        "zf_invertible_fraction": _round(result.zf_invertible_fraction),
    }


def _write_csv(frame: pd.DataFrame, target: Path) -> Path:
    frame.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return target


def emit_report(result: CampaignResult, format: str, path: PathLike) -> List[Path]:
    """Write the report files for ``format`` into directory ``path``; returns the written paths."""
    if not result.schemes:
        raise ConfigurationError("Cannot emit a report without schemes.")
    if not result.records:
        raise ConfigurationError("Cannot emit a report without results.")
    if format not in FORMATS:
        raise ConfigurationError(f"Unknown report format '{format}'. Use one of {FORMATS}.")
    out_dir = Path(path)
    written: List[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for scheme, series in scheme_cdfs(result).items():
            table = pd.DataFrame({"value": series.values, "probability": series.probabilities})
            written.append(_write_csv(table, out_dir / f"cdf_{scheme}.csv"))
        written.append(_write_csv(powers_frame(result), out_dir / "powers.csv"))
        if format == "csv":
            written.append(_write_csv(summary_frame(result), out_dir / "summary.csv"))
            written.append(_write_csv(eigenvalue_frame(result), out_dir / "eigenvalues.csv"))
        else:
            target = out_dir / "summary.json"
            target.write_text(json.dumps(_summary_payload(result), indent=2, sort_keys=True) + "\n", encoding="utf-8")
            written.append(target)
    except OSError as exc:
        raise ReportError(f"Cannot write report to {out_dir}: {exc}") from exc
    logger.info(f"Wrote {len(written)} {format} report files to {out_dir}")
    return written


def render_cdf_figure(result: CampaignResult, path: PathLike) -> Path:
    """Per-scheme spectral-efficiency CDFs with the 10/50/90% points marked."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    target = Path(path)
    fig, ax = plt.subplots(figsize=(7, 5))
    for scheme, series in scheme_cdfs(result).items():
        (line,) = ax.step(series.values, series.probabilities, where="post", label=scheme)
        marks = [series.percentile(p) for p in (10, 50, 90)]
        ax.plot(marks, [0.1, 0.5, 0.9], "o", color=line.get_color(), markersize=4)
    ax.set_xlabel("Spectral efficiency per user (bit/s/Hz)")
    ax.set_ylabel("CDF")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    cfg = result.config
    ax.set_title(
        f"{cfg.channel_profile}, R={cfg.cell_radius:g} m, K={cfg.users_per_cell}, N_S={cfg.streams_per_user}"
    )
    ax.legend(loc="lower right")
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(target, dpi=150, bbox_inches="tight")
    except OSError as exc:
        raise ReportError(f"Cannot write figure {target}: {exc}") from exc
    finally:
        plt.close(fig)
    logger.info(f"Wrote CDF figure to {target}")
    return target


__all__ = [
    "SCHEMA_VERSION",
    "FORMATS",
    "scheme_cdfs",
    "summary_frame",
    "powers_frame",
    "eigenvalue_frame",
    "emit_report",
    "render_cdf_figure",
]
