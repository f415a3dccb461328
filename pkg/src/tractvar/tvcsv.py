"""Reading and writing tract-variable CSV files and anatomy JSON.

A TV file has the header `t,LA,LP,TBCL,TBCD,TTCL,TTCD,quality`.  Frames
whose quality is not Ok leave their absent variables as empty cells.
Values are written with shortest round-trip repr so files re-read
bit-exactly.  Angles are stored in radians unless a writer is asked for
degrees; readers do not convert.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .anatomy import SpeakerAnatomy
from .errors import ParseError, SchemaError
from .geometry import Polyline
from .tract_variables import Quality, TractVariableFrame, TvTrajectory

TV_HEADER = ("t", "LA", "LP", "TBCL", "TBCD", "TTCL", "TTCD", "quality")
TV_NAMES = ("LA", "LP", "TBCL", "TBCD", "TTCL", "TTCD")
ANGLE_NAMES = frozenset(("TBCL", "TTCL"))

_FIELD_BY_NAME = {
    "LA": "la",
    "LP": "lp",
    "TBCL": "tbcl",
    "TBCD": "tbcd",
    "TTCL": "ttcl",
    "TTCD": "ttcd",
}


def _format_value(value: float | None, name: str, degrees: bool) -> str:
    if value is None:
        return ""
    if degrees and name in ANGLE_NAMES:
        value = math.degrees(value)
    return repr(value)


def write_tv_csv(
    trajectory: TvTrajectory, path: str | Path, degrees: bool = False
) -> None:
    """Write one utterance's tract variables."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TV_HEADER)
        for frame in trajectory.frames:
            row = [repr(frame.t)]
            for name in TV_NAMES:
                row.append(
                    _format_value(getattr(frame, _FIELD_BY_NAME[name]), name, degrees)
                )
            row.append(frame.quality.value)
            writer.writerow(row)


def read_tv_csv(
    path: str | Path,
) -> tuple[np.ndarray, dict[str, list[float | None]], list[str]]:
    """Read a TV file into (times, column values, quality strings).

    No unit conversion happens here; values come back as stored.
    """
    path = Path(path)
    times: list[float] = []
    columns: dict[str, list[float | None]] = {name: [] for name in TV_NAMES}
    quality: list[str] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != TV_HEADER:
            raise SchemaError(f"{path}: header does not match the TV schema")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(TV_HEADER):
                raise ParseError(
                    f"expected {len(TV_HEADER)} fields, got {len(row)}", path, line_no
                )
            try:
                times.append(float(row[0]))
            except ValueError as exc:
                raise ParseError(f"bad timestamp {row[0]!r}", path, line_no, "t") from exc
            for k, name in enumerate(TV_NAMES, start=1):
                token = row[k].strip()
                if not token:
                    columns[name].append(None)
                    continue
                try:
                    columns[name].append(float(token))
                except ValueError as exc:
                    raise ParseError(
                        f"bad value {token!r}", path, line_no, name
                    ) from exc
            quality.append(row[7].strip())
    return np.array(times, dtype=np.float64), columns, quality


def frames_from_csv(path: str | Path) -> TvTrajectory:
    """Rebuild a TvTrajectory from a TV file written in radians."""
    times, columns, quality = read_tv_csv(path)
    frames = []
    for i, t in enumerate(times):
        frames.append(
            TractVariableFrame(
                t=float(t),
                la=columns["LA"][i],
                lp=columns["LP"][i],
                tbcl=columns["TBCL"][i],
                tbcd=columns["TBCD"][i],
                ttcl=columns["TTCL"][i],
                ttcd=columns["TTCD"][i],
                quality=Quality(quality[i]),
            )
        )
    if len(times) >= 2:
        rate = (len(times) - 1) / float(times[-1] - times[0])
    else:
        rate = 145.0
    return TvTrajectory(speaker_id="", frames=tuple(frames), sample_rate=rate)


def _trace_to_list(trace: Polyline) -> list[list[float]]:
    return [[p.x, p.y] for p in trace.points]


def write_anatomy_json(anat: SpeakerAnatomy, path: str | Path) -> None:
    """Write the derived anatomy bundle for one speaker."""
    payload = {
        "speaker_id": anat.speaker_id,
        "sex": anat.sex.value,
        "thickness_mm": anat.thickness_mm,
        "palate": _trace_to_list(anat.palate),
        "posterior_wall": _trace_to_list(anat.posterior_wall),
        "anterior_wall": _trace_to_list(anat.anterior_wall),
        "extended_palate": _trace_to_list(anat.extended_palate),
        "reference_center": [anat.reference_center.x, anat.reference_center.y],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
