"""File ingestion: pellet trajectories, anatomical traces, manifests.

Pellet files are CSV with the exact header

    t,ULx,ULy,LLx,LLy,T1x,T1y,T2x,T2y,T3x,T3y,T4x,T4y,MNIx,MNIy,MNMx,MNMy

where t is seconds and the coordinates are millimeters.  Mistracked
pellets are encoded by sentinel coordinates of magnitude >= 9.9e5; such a
pellet is carried through as invalid, never interpolated away silently.

Trace files are two-column CSV (header `x,y`).  Palate traces are kept
anterior-to-posterior (descending x) and pharyngeal walls superior-to-
inferior (descending y); files stored the other way around are reversed
on load with a logged warning.

A speaker manifest is a JSON object (or a list of them) with keys
`speaker_id`, `sex` ("F" or "M"), optional `thickness_mm`, `palate`,
`posterior_wall`, and `utterances`; the path values are resolved
relative to the manifest file.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .anatomy import Sex
from .errors import (
    ConfigError,
    DegenerateTrace,
    InsufficientData,
    ParseError,
    SchemaError,
)
from .geometry import Point2D, Polyline
from .tract_variables import PELLET_NAMES, PelletFrame

logger = logging.getLogger(__name__)

# Coordinate magnitude at or above which a pellet sample counts as
# mistracked.
SENTINEL_MAGNITUDE = 9.9e5

# Value written back out for invalid pellets.
_SENTINEL_OUT = 1e6

# Default output rate (samples per second) for resampling.
TARGET_RATE_HZ = 145.0

PELLET_HEADER = (
    "t",
    "ULx", "ULy", "LLx", "LLy",
    "T1x", "T1y", "T2x", "T2y", "T3x", "T3y", "T4x", "T4y",
    "MNIx", "MNIy", "MNMx", "MNMy",
)

TRACE_HEADER = ("x", "y")


@dataclass(frozen=True)
class PelletTrajectory:
    """A sequence of pellet frames with strictly increasing timestamps."""

    speaker_id: str
    utterance_id: str
    frames: tuple[PelletFrame, ...]
    native_rate: float

    def __post_init__(self) -> None:
        if self.native_rate <= 0.0 or not math.isfinite(self.native_rate):
            raise ValueError(f"native rate must be positive, got {self.native_rate}")
        for i in range(len(self.frames) - 1):
            if self.frames[i + 1].t <= self.frames[i].t:
                raise ValueError(
                    f"timestamps not strictly increasing at frame {i + 1}"
                )


@dataclass
class IngestReport:
    """Bookkeeping for one ingested utterance."""

    frames_read: int = 0
    frames_mistracked: int = 0
    pellets_interpolated: int = 0
    warnings: list[str] = field(default_factory=list)


def _parse_float(token: str, path: Path, line: int, column: str) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ParseError(
            f"cannot parse {token!r} as a number", path, line, column
        ) from exc
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {token!r}", path, line, column)
    return value


def parse_pellet_file(
    path: str | Path,
    *,
    speaker_id: str = "",
    utterance_id: str | None = None,
    sentinel_magnitude: float = SENTINEL_MAGNITUDE,
) -> tuple[PelletTrajectory, IngestReport]:
    """Read one utterance's pellet CSV.

    Returns the trajectory plus an ingest report.  Raises SchemaError for
    a bad header and ParseError for malformed rows, non-monotone time, or
    fewer than two rows.
    """
    path = Path(path)
    report = IngestReport()
    frames: list[PelletFrame] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != PELLET_HEADER:
            missing = set(PELLET_HEADER) - {h.strip() for h in header}
            detail = f"missing columns {sorted(missing)}" if missing else "bad column order"
            raise SchemaError(
                f"{path}: header does not match the pellet schema ({detail})"
            )
        prev_t = None
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(PELLET_HEADER):
                raise ParseError(
                    f"expected {len(PELLET_HEADER)} fields, got {len(row)}",
                    path,
                    line_no,
                )
            t = _parse_float(row[0], path, line_no, "t")
            if prev_t is not None and t <= prev_t:
                raise ParseError(
                    f"timestamp {t!r} does not increase past {prev_t!r}",
                    path,
                    line_no,
                    "t",
                )
            prev_t = t
            positions = {}
            valid = set()
            for k, name in enumerate(PELLET_NAMES):
                x = _parse_float(row[1 + 2 * k], path, line_no, f"{name}x")
                y = _parse_float(row[2 + 2 * k], path, line_no, f"{name}y")
                positions[name.lower()] = Point2D(x, y)
                if abs(x) < sentinel_magnitude and abs(y) < sentinel_magnitude:
                    valid.add(name)
            if len(valid) < len(PELLET_NAMES):
                report.frames_mistracked += 1
            frames.append(PelletFrame(t=t, valid=frozenset(valid), **positions))
    report.frames_read = len(frames)
    if len(frames) < 2:
        raise ParseError(f"need at least 2 rows, got {len(frames)}", path)
    span = frames[-1].t - frames[0].t
    native_rate = (len(frames) - 1) / span
    return (
        PelletTrajectory(
            speaker_id=speaker_id,
            utterance_id=utterance_id if utterance_id is not None else path.stem,
            frames=tuple(frames),
            native_rate=native_rate,
        ),
        report,
    )


def write_pellet_file(trajectory: PelletTrajectory, path: str | Path) -> None:
    """Write a trajectory back to pellet CSV.

    Valid pellet coordinates round-trip bit-exactly (shortest repr);
    invalid pellets are written as the 1e6 sentinel so the flag survives.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PELLET_HEADER)
        for frame in trajectory.frames:
            row = [repr(frame.t)]
            for name in PELLET_NAMES:
                if frame.is_valid(name):
                    p = frame.pellet(name)
                    row.append(repr(p.x))
                    row.append(repr(p.y))
                else:
                    row.append(repr(_SENTINEL_OUT))
                    row.append(repr(_SENTINEL_OUT))
            writer.writerow(row)


def parse_trace_file(path: str | Path, kind: str) -> Polyline:
    """Read an anatomical trace (kind "palate" or "wall").

    Normalizes orientation (palates descend in x, walls in y), collapses
    exactly repeated consecutive points with a warning, and raises
    DegenerateTrace when fewer than two distinct points remain.
    """
    if kind not in ("palate", "wall"):
        raise ValueError(f"kind must be 'palate' or 'wall', got {kind!r}")
    path = Path(path)
    points: list[Point2D] = []
    dropped = 0
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != TRACE_HEADER:
            raise SchemaError(f"{path}: trace header must be 'x,y'")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", path, line_no)
            x = _parse_float(row[0], path, line_no, "x")
            y = _parse_float(row[1], path, line_no, "y")
            p = Point2D(x, y)
            if points and points[-1] == p:
                dropped += 1
                continue
            points.append(p)
    if dropped:
        logger.warning("%s: collapsed %d repeated consecutive point(s)", path, dropped)
    if len(points) < 2:
        raise DegenerateTrace(f"{path}: fewer than 2 distinct points")
    if kind == "palate":
        ascending = points[0].x < points[-1].x
        axis = "x"
    else:
        ascending = points[0].y < points[-1].y
        axis = "y"
    if ascending:
        points.reverse()
        logger.warning(
            "%s: %s trace was ordered by ascending %s; reversed on load",
            path,
            kind,
            axis,
        )
    return Polyline(points)


def resample(
    trajectory: PelletTrajectory,
    target_rate: float = TARGET_RATE_HZ,
    report: IngestReport | None = None,
) -> PelletTrajectory:
    """Resample a trajectory onto a uniform grid at `target_rate`.

    The grid starts exactly at the first input timestamp and steps by
    1/rate computed fresh per sample (no cumulative drift).  Each pellet
    coordinate is interpolated linearly between its temporally adjacent
    valid samples; an output sample whose enclosing raw interval touches
    an invalid input sample is flagged invalid for that pellet.  Grid
    points that coincide with input timestamps reproduce the input values
    exactly.

    When `report` is given, its `pellets_interpolated` counter grows by
    the number of pellet samples that were synthesized between input
    timestamps (exact grid hits do not count).

    Raises InsufficientData when the trajectory has fewer than two frames
    or some pellet has fewer than two valid samples.
    """
    if target_rate <= 0.0 or not math.isfinite(target_rate):
        raise ValueError(f"target rate must be positive, got {target_rate}")
    frames = trajectory.frames
    n = len(frames)
    if n < 2:
        raise InsufficientData(
            f"{trajectory.utterance_id}: need at least 2 frames to resample, got {n}"
        )
    times = np.array([f.t for f in frames], dtype=np.float64)
    span = float(times[-1] - times[0])
    count = int(math.floor(span * target_rate + 1e-9)) + 1
    steps = np.arange(count, dtype=np.float64)
    grid = times[0] + steps / target_rate

    # Locate each grid time against the raw input grid once; validity
    # contamination is defined on raw intervals regardless of which
    # samples are valid.
    right = np.searchsorted(times, grid, side="left")
    right = np.clip(right, 0, n - 1)
    exact = times[right] == grid
    left = np.where(exact, right, np.maximum(right - 1, 0))

    out_x: dict[str, np.ndarray] = {}
    out_y: dict[str, np.ndarray] = {}
    out_valid: dict[str, np.ndarray] = {}
    for name in PELLET_NAMES:
        lname = name.lower()
        valid_mask = np.array([f.is_valid(name) for f in frames], dtype=bool)
        if int(valid_mask.sum()) < 2:
            raise InsufficientData(
                f"{trajectory.utterance_id}: pellet {name} has "
                f"{int(valid_mask.sum())} valid sample(s), cannot interpolate"
            )
        xs = np.array([getattr(f, lname).x for f in frames], dtype=np.float64)
        ys = np.array([getattr(f, lname).y for f in frames], dtype=np.float64)
        tv = times[valid_mask]
        out_x[name] = np.interp(grid, tv, xs[valid_mask])
        out_y[name] = np.interp(grid, tv, ys[valid_mask])
        out_valid[name] = valid_mask[left] & valid_mask[right]
        if report is not None:
            report.pellets_interpolated += int(np.count_nonzero(~exact))

    new_frames = []
    for k in range(count):
        positions = {}
        valid = set()
        for name in PELLET_NAMES:
            positions[name.lower()] = Point2D(
                float(out_x[name][k]), float(out_y[name][k])
            )
            if out_valid[name][k]:
                valid.add(name)
        new_frames.append(
            PelletFrame(t=float(grid[k]), valid=frozenset(valid), **positions)
        )
    return PelletTrajectory(
        speaker_id=trajectory.speaker_id,
        utterance_id=trajectory.utterance_id,
        frames=tuple(new_frames),
        native_rate=target_rate,
    )


@dataclass(frozen=True)
class SpeakerSpec:
    """One manifest entry, with paths already resolved."""

    speaker_id: str
    sex: Sex
    thickness_mm: float | None
    palate_path: Path
    posterior_wall_path: Path
    utterance_paths: tuple[Path, ...]


def _speaker_from_mapping(entry: object, base: Path) -> SpeakerSpec:
    if not isinstance(entry, dict):
        raise ConfigError(f"manifest entry must be an object, got {type(entry).__name__}")
    try:
        speaker_id = entry["speaker_id"]
        sex_code = entry["sex"]
        palate = entry["palate"]
        wall = entry["posterior_wall"]
        utterances = entry["utterances"]
    except KeyError as exc:
        raise ConfigError(f"manifest entry is missing key {exc}") from exc
    if not isinstance(speaker_id, str) or not speaker_id:
        raise ConfigError("speaker_id must be a non-empty string")
    try:
        sex = Sex(sex_code)
    except ValueError:
        raise ConfigError(
            f"speaker {speaker_id}: sex must be 'F' or 'M', got {sex_code!r}"
        ) from None
    thickness = entry.get("thickness_mm")
    if thickness is not None:
        if not isinstance(thickness, (int, float)) or thickness <= 0:
            raise ConfigError(
                f"speaker {speaker_id}: thickness_mm must be positive, got {thickness!r}"
            )
        thickness = float(thickness)
    if not isinstance(utterances, list):
        raise ConfigError(f"speaker {speaker_id}: utterances must be a list of paths")
    return SpeakerSpec(
        speaker_id=speaker_id,
        sex=sex,
        thickness_mm=thickness,
        palate_path=base / str(palate),
        posterior_wall_path=base / str(wall),
        utterance_paths=tuple(base / str(u) for u in utterances),
    )


def load_manifest(path: str | Path) -> list[SpeakerSpec]:
    """Load a speaker manifest (single object or list of objects)."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    base = path.parent
    entries = data if isinstance(data, list) else [data]
    if not entries:
        raise ConfigError(f"{path}: manifest lists no speakers")
    return [_speaker_from_mapping(entry, base) for entry in entries]
