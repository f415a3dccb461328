"""Self-contained SVG figures for anatomy and tract-variable traces."""

from __future__ import annotations

import math
from pathlib import Path

from .anatomy import SpeakerAnatomy
from .tract_variables import TvTrajectory
from .tvcsv import ANGLE_NAMES, TV_NAMES, _FIELD_BY_NAME

_ANATOMY_SIZE = (640, 520)
_TV_SIZE = (800, 96)
_MARGIN = 40.0

_TRACE_STYLES = (
    ("palate", "#1f4e79", "none"),
    ("extension", "#1f4e79", "6 4"),
    ("anterior-wall", "#b22222", "none"),
    ("posterior-wall", "#777777", "none"),
)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polyline_svg(cls: str, color: str, dash: str, pts: list[tuple[float, float]]) -> str:
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    dash_attr = f' stroke-dasharray="{dash}"' if dash != "none" else ""
    return (
        f'<polyline class="{cls}" fill="none" stroke="{color}" '
        f'stroke-width="1.5"{dash_attr} points="{coords}"/>'
    )


def anatomy_svg(anat: SpeakerAnatomy) -> str:
    """One figure: palate, its extension, and both pharyngeal walls.

    The palatal reference center is drawn as a marker circle.
    """
    palate = [(p.x, p.y) for p in anat.palate.points]
    n_palate = len(palate)
    extension = [(p.x, p.y) for p in anat.extended_palate.points[n_palate - 1 :]]
    anterior = [(p.x, p.y) for p in anat.anterior_wall.points]
    posterior = [(p.x, p.y) for p in anat.posterior_wall.points]
    center = (anat.reference_center.x, anat.reference_center.y)

    everything = palate + extension + anterior + posterior + [center]
    xs = [p[0] for p in everything]
    ys = [p[1] for p in everything]
    w, h = _ANATOMY_SIZE
    span_x = max(xs) - min(xs) or 1.0
    span_y = max(ys) - min(ys) or 1.0
    scale = min((w - 2 * _MARGIN) / span_x, (h - 2 * _MARGIN) / span_y)

    def to_px(p: tuple[float, float]) -> tuple[float, float]:
        # +y is superior anatomically but down in SVG, so flip.
        return (
            _MARGIN + (p[0] - min(xs)) * scale,
            h - _MARGIN - (p[1] - min(ys)) * scale,
        )

    traces = [palate, extension, anterior, posterior]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<title>speaker {anat.speaker_id} anatomy</title>',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    for (cls, color, dash), pts in zip(_TRACE_STYLES, traces):
        parts.append(_polyline_svg(cls, color, dash, [to_px(p) for p in pts]))
    cx, cy = to_px(center)
    parts.append(
        f'<circle class="reference-center" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
        f'fill="#e08214" stroke="black" stroke-width="0.8"/>'
    )
    legend_y = 20
    for i, (cls, color, _) in enumerate(_TRACE_STYLES):
        parts.append(
            f'<text x="{w - 170}" y="{legend_y + 16 * i}" font-size="12" '
            f'fill="{color}" font-family="sans-serif">{cls}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def tv_svg(trajectory: TvTrajectory, degrees: bool = False) -> str:
    """Six stacked panels, one per tract variable, sharing the time axis.

    Missing values split the trace; an all-missing panel keeps its axes.
    """
    w, panel_h = _TV_SIZE
    n_panels = len(TV_NAMES)
    h = panel_h * n_panels
    frames = trajectory.frames
    if frames:
        t0 = frames[0].t
        t1 = frames[-1].t
    else:
        t0, t1 = 0.0, 1.0
    span_t = (t1 - t0) or 1.0
    pad = 8.0
    label_w = 70.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    for idx, name in enumerate(TV_NAMES):
        field = _FIELD_BY_NAME[name]
        values: list[float | None] = []
        for frame in frames:
            v = getattr(frame, field)
            if v is not None and degrees and name in ANGLE_NAMES:
                v = math.degrees(v)
            values.append(v)
        present = [v for v in values if v is not None]
        lo = min(present) if present else 0.0
        hi = max(present) if present else 1.0
        if hi == lo:
            lo -= 0.5
            hi += 0.5
        top = idx * panel_h
        y_of = lambda v: top + panel_h - pad - (v - lo) / (hi - lo) * (panel_h - 2 * pad)
        x_of = lambda t: label_w + (t - t0) / span_t * (w - label_w - pad)
        parts.append(f'<g class="panel" id="panel-{name}">')
        parts.append(
            f'<line x1="{label_w}" y1="{top + panel_h - pad:.2f}" x2="{w - pad}" '
            f'y2="{top + panel_h - pad:.2f}" stroke="#999" stroke-width="0.8"/>'
        )
        parts.append(
            f'<line x1="{label_w}" y1="{top + pad:.2f}" x2="{label_w}" '
            f'y2="{top + panel_h - pad:.2f}" stroke="#999" stroke-width="0.8"/>'
        )
        parts.append(
            f'<text x="8" y="{top + panel_h / 2:.2f}" font-size="13" '
            f'font-family="sans-serif">{name}</text>'
        )
        run: list[tuple[float, float]] = []
        runs: list[list[tuple[float, float]]] = []
        for frame, v in zip(frames, values):
            if v is None:
                if run:
                    runs.append(run)
                    run = []
                continue
            run.append((x_of(frame.t), y_of(v)))
        if run:
            runs.append(run)
        for run in runs:
            if len(run) == 1:
                x, y = run[0]
                parts.append(
                    f'<circle class="series" cx="{_fmt(x)}" cy="{_fmt(y)}" r="1.5" '
                    f'fill="#1f4e79"/>'
                )
            else:
                parts.append(_polyline_svg("series", "#1f4e79", "none", run))
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def emit_plots(
    anat: SpeakerAnatomy,
    trajectory: TvTrajectory,
    output_dir: str | Path,
    degrees: bool = False,
) -> tuple[Path, Path]:
    """Write anatomy.svg and tvs.svg into a directory."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    anatomy_path = out / "anatomy.svg"
    tv_path = out / "tvs.svg"
    anatomy_path.write_text(anatomy_svg(anat), encoding="utf-8")
    tv_path.write_text(tv_svg(trajectory, degrees=degrees), encoding="utf-8")
    return anatomy_path, tv_path
