"""
Offline channel dumps for ``--dump-channels``.

Binary layout (little endian), repeated once per link after an 8 byte file
header ``b"HBFC" + uint32 version``::

    uint32 drop, uint32 tp, uint32 user, uint32 rows, uint32 cols,
    float64 path_loss_linear, float64 pattern_gain_linear, uint8 los,
    rows*cols*2 float64   # row-major, interleaved real/imag

A path ending in ``.csv`` gets one row per matrix entry instead, with columns
``drop,tp,user,rows,cols,row,col,re,im,path_loss_linear,pattern_gain_linear,los``.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable, List, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from hbfsim.core.base import ReportError

from .model import ChannelRealization

logger = logging.getLogger(__name__)

MAGIC = b"HBFC"
DUMP_VERSION = 1
_FILE_HEADER = struct.Struct("<4sI")
_RECORD_HEADER = struct.Struct("<IIIIIddB")

DumpEntry = Tuple[int, int, int, ChannelRealization]
PathLike = Union[str, Path]


@dataclass(frozen=True, slots=True)
class DumpedChannel:
    drop: int
    tp: int
    user: int
    H: np.ndarray
    path_loss_linear: float
    pattern_gain_linear: float
    los: bool


def _write_binary(handle: BinaryIO, entries: Iterable[DumpEntry]) -> int:
    count = 0
    for drop, tp, user, realization in entries:
        matrix = np.ascontiguousarray(realization.H, dtype=np.complex128)
        rows, cols = matrix.shape
        handle.write(
            _RECORD_HEADER.pack(
                drop, tp, user, rows, cols,
                realization.path_loss_linear, realization.pattern_gain_linear, int(realization.los),
            )
        )
        handle.write(matrix.view(np.float64).astype("<f8").tobytes())
        count += 1
    return count


CSV_COLUMNS = (
    "drop", "tp", "user", "rows", "cols", "row", "col", "re", "im",
    "path_loss_linear", "pattern_gain_linear", "los",
)


def _csv_rows(drop: int, tp: int, user: int, realization: ChannelRealization) -> pd.DataFrame:
    rows, cols = realization.H.shape
    row_idx, col_idx = np.divmod(np.arange(rows * cols), cols)
    flat = realization.H.reshape(-1)
    return pd.DataFrame(
        {
            "drop": drop,
            "tp": tp,
            "user": user,
            "rows": rows,
            "cols": cols,
            "row": row_idx,
            "col": col_idx,
            "re": flat.real,
            "im": flat.imag,
            "path_loss_linear": realization.path_loss_linear,
            "pattern_gain_linear": realization.pattern_gain_linear,
            "los": int(realization.los),
        },
        columns=list(CSV_COLUMNS),
    )


def _write_csv(handle: TextIO, entries: Iterable[DumpEntry]) -> int:
    handle.write(",".join(CSV_COLUMNS) + "\n")
    count = 0
    for drop, tp, user, realization in entries:
        # one link per write
        _csv_rows(drop, tp, user, realization).to_csv(
            handle, header=False, index=False, float_format="%.17g", lineterminator="\n"
        )
        count += 1
    return count


def write_channel_dump(path: PathLike, entries: Iterable[DumpEntry]) -> int:
    """Write ``(drop, tp, user, realization)`` entries; returns the link count."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        if target.suffix.lower() == ".csv":
            with target.open("w", newline="") as handle:
                count = _write_csv(handle, entries)
        else:
            with target.open("wb") as handle:
                handle.write(_FILE_HEADER.pack(MAGIC, DUMP_VERSION))
                count = _write_binary(handle, entries)
    except OSError as exc:
        raise ReportError(f"Cannot write channel dump to {target}: {exc}") from exc
    logger.info(f"Dumped {count} channel matrices to {target}")
    return count


def read_channel_dump(path: PathLike) -> List[DumpedChannel]:
    source = Path(path)
    try:
        if source.suffix.lower() == ".csv":
            return _read_csv(source)
        payload = source.read_bytes()
    except OSError as exc:
        raise ReportError(f"Cannot read channel dump {source}: {exc}") from exc
    if len(payload) < _FILE_HEADER.size:
        raise ReportError(f"{source} is too short to be a channel dump.")
    magic, version = _FILE_HEADER.unpack_from(payload, 0)
    if magic != MAGIC or version != DUMP_VERSION:
        raise ReportError(f"{source} is not a version {DUMP_VERSION} channel dump.")
    offset = _FILE_HEADER.size
    channels: List[DumpedChannel] = []
    while offset < len(payload):
        if len(payload) - offset < _RECORD_HEADER.size:
            raise ReportError(f"{source} is truncated inside the header of link {len(channels)}.")
        drop, tp, user, rows, cols, loss, pattern, los = _RECORD_HEADER.unpack_from(payload, offset)
        offset += _RECORD_HEADER.size
        n_bytes = rows * cols * 16
        if len(payload) - offset < n_bytes:
            raise ReportError(f"{source} is truncated inside the matrix of link {len(channels)}.")
        values = np.frombuffer(payload, dtype="<f8", count=rows * cols * 2, offset=offset)
        offset += n_bytes
        matrix = values.astype(np.float64).view(np.complex128).reshape(rows, cols)
        channels.append(DumpedChannel(drop, tp, user, matrix, loss, pattern, bool(los)))
    return channels


def _read_csv(source: Path) -> List[DumpedChannel]:
    frame = pd.read_csv(source, float_precision="round_trip")
    channels: List[DumpedChannel] = []
    for (drop, tp, user), group in frame.groupby(["drop", "tp", "user"], sort=False):
        rows, cols = int(group["rows"].iloc[0]), int(group["cols"].iloc[0])
        matrix = np.zeros((rows, cols), dtype=np.complex128)
        matrix[group["row"].to_numpy(), group["col"].to_numpy()] = group["re"].to_numpy() + 1j * group["im"].to_numpy()
        channels.append(
            DumpedChannel(
                int(drop), int(tp), int(user), matrix,
                float(group["path_loss_linear"].iloc[0]),
                float(group["pattern_gain_linear"].iloc[0]),
                bool(group["los"].iloc[0]),
            )
        )
    return channels


__all__ = ["MAGIC", "DUMP_VERSION", "DumpedChannel", "write_channel_dump", "read_channel_dump"]
