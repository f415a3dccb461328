"""Trajectory comparison via Pearson product-moment correlation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, TimebaseMismatch, ZeroVariance
from .tvcsv import TV_NAMES, read_tv_csv

# Two frames count as simultaneous when their stamps agree this closely.
_TIME_TOL_S = 1e-6


def ppmc(a, b) -> float:
    """Pearson correlation of two equal-length series.

    The result is clamped onto [-1, 1]; floating-point overshoot beyond
    that never exceeds ~1e-16 for centered sums.  Raises LengthMismatch
    for unequal or too-short series and ZeroVariance when either side is
    constant.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatch(f"series lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.ndim != 1 or x.shape[0] < 2:
        raise LengthMismatch(f"need at least 2 samples, got {x.shape}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("correlation undefined for a constant series")
    r = float(np.dot(dx, dy)) / np.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class ComparisonReport:
    """Per-variable correlations between two TV files."""

    scores: dict[str, float]
    average: float
    n_frames_compared: int

    def to_json_dict(self) -> dict:
        return {
            "scores": dict(self.scores),
            "average": self.average,
            "n_frames_compared": self.n_frames_compared,
        }


def compare_tvs(path_a, path_b) -> ComparisonReport:
    """Correlate two TV files variable by variable.

    The files must have the same frame count and agree on timestamps
    within 1e-6 s.  Frames whose quality is not Ok in either file are
    excluded pairwise before correlating.  The summary score is the
    arithmetic mean of the six correlations.
    """
    times_a, cols_a, quality_a = read_tv_csv(path_a)
    times_b, cols_b, quality_b = read_tv_csv(path_b)
    if len(times_a) != len(times_b):
        raise LengthMismatch(
            f"frame counts differ: {len(times_a)} vs {len(times_b)}"
        )
    if len(times_a) and float(np.max(np.abs(times_a - times_b))) > _TIME_TOL_S:
        worst = int(np.argmax(np.abs(times_a - times_b)))
        raise TimebaseMismatch(
            f"timestamps disagree at frame {worst}: "
            f"{times_a[worst]!r} vs {times_b[worst]!r}"
        )
    included = [
        i
        for i in range(len(times_a))
        if quality_a[i] == "Ok" and quality_b[i] == "Ok"
    ]
    scores: dict[str, float] = {}
    for name in TV_NAMES:
        series_a = [cols_a[name][i] for i in included]
        series_b = [cols_b[name][i] for i in included]
        scores[name] = ppmc(series_a, series_b)
    average = sum(scores.values()) / len(scores)
    return ComparisonReport(
        scores=scores, average=average, n_frames_compared=len(included)
    )


def format_table(report: ComparisonReport) -> str:
    """Render a report as a fixed-width table, one PPMC row."""
    names = list(TV_NAMES) + ["Average"]
    values = [report.scores[n] for n in TV_NAMES] + [report.average]
    head = "  ".join(f"{n:>8s}" for n in names)
    body = "  ".join(f"{v:>8.4f}" for v in values)
    return (
        f"{head}\n{body}\n"
        f"frames compared: {report.n_frames_compared}"
    )
