"""Per-frame tract variables from pellet positions and speaker anatomy.

Six variables are produced per frame:

* LA, lip aperture: distance between the upper and lower lip pellets.
* LP, lip protrusion: horizontal position of the upper lip pellet.
* TBCD / TBCL, tongue-body constriction degree and location: minimum
  clearance between the circle through the three rear tongue pellets and
  the extended palate, and the angle of the attaining circle point about
  the palatal reference center.
* TTCD / TTCL, tongue-tip constriction degree and location: minimum
  distance from the front tongue pellet to the extended palate, and its
  angle about the same center.

Degrees are in millimeters, locations in radians.  Frames with invalid
pellets or a degenerate (collinear) tongue posture are flagged through
`Quality`; a flagged variable is absent (None), never a silent zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .anatomy import SpeakerAnatomy
from .errors import CollinearPoints
from .geometry import (
    Circle,
    Point2D,
    angle_from_reference,
    circle_polyline_clearance,
    circumcircle,
    distance,
    point_polyline_clearance,
)

if TYPE_CHECKING:
    from .ingest import PelletTrajectory

# Canonical pellet order: lips, tongue front-to-back, mandible.
PELLET_NAMES = ("UL", "LL", "T1", "T2", "T3", "T4", "MNI", "MNM")

# Pellets that feed at least one tract variable.  The mandible pellets
# ride along in the data but are not consumed here.
REQUIRED_PELLETS = ("UL", "LL", "T1", "T2", "T3", "T4")

_ALL_VALID = frozenset(PELLET_NAMES)


class Quality(enum.Enum):
    """Per-frame data quality flag, serialized by value."""

    OK = "Ok"
    DEGENERATE_TONGUE = "DegenerateTongue"
    MISSING_PELLET = "MissingPellet"


@dataclass(frozen=True, slots=True)
class PelletFrame:
    """One time sample of the eight tracked pellets.

    `valid` holds the names of pellets whose positions can be trusted;
    positions of invalid pellets must not be read.
    """

    t: float
    ul: Point2D
    ll: Point2D
    t1: Point2D
    t2: Point2D
    t3: Point2D
    t4: Point2D
    mni: Point2D
    mnm: Point2D
    valid: frozenset[str] = _ALL_VALID

    def pellet(self, name: str) -> Point2D:
        return getattr(self, name.lower())

    def is_valid(self, name: str) -> bool:
        return name in self.valid


@dataclass(frozen=True, slots=True)
class TractVariableFrame:
    """Six tract variables for one time sample.

    Absent variables (pellet invalid for that variable) are None and the
    quality flag says why.
    """

    t: float
    la: float | None
    lp: float | None
    tbcl: float | None
    tbcd: float | None
    ttcl: float | None
    ttcd: float | None
    quality: Quality


@dataclass(frozen=True)
class TvOptions:
    """Knobs for the per-frame computation.

    `clamp_tbcd` clamps negative tongue-body clearances (trace inside the
    circle) to zero; by default the signed value is kept because the
    penetration depth carries articulatory information.
    """

    clamp_tbcd: bool = False


_DEFAULT_OPTIONS = TvOptions()


@dataclass(frozen=True)
class TvTrajectory:
    """A uniformly sampled sequence of tract-variable frames."""

    speaker_id: str
    frames: tuple[TractVariableFrame, ...] = field(default=())
    sample_rate: float = 145.0

    def __post_init__(self) -> None:
        if self.sample_rate <= 0.0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        if self.frames:
            t0 = self.frames[0].t
            step = 1.0 / self.sample_rate
            for k, frame in enumerate(self.frames):
                if abs(frame.t - (t0 + k * step)) > 1e-6:
                    raise ValueError(
                        f"frame {k} at t={frame.t!r} is off the uniform "
                        f"{self.sample_rate} Hz grid"
                    )


def compute_la(frame: PelletFrame) -> float:
    """Lip aperture: Euclidean distance between the lip pellets."""
    return distance(frame.ul, frame.ll)


def compute_lp(frame: PelletFrame) -> float:
    """Lip protrusion: upper-lip x, sign preserved (origin at the incisor)."""
    return frame.ul.x


def tongue_body_circle(frame: PelletFrame) -> Circle:
    """Circle through the three rear tongue pellets (T2, T3, T4).

    Raises CollinearPoints when the posture is flat within tolerance.
    """
    return circumcircle(frame.t2, frame.t3, frame.t4)


def compute_tongue_body_tvs(
    frame: PelletFrame,
    anat: SpeakerAnatomy,
    options: TvOptions = _DEFAULT_OPTIONS,
) -> tuple[float, float]:
    """(TBCD, TBCL) via the tongue-body circle.

    TBCD is the signed clearance between the circle and the extended
    palate; TBCL the angle of the attaining circle point about the
    palatal reference center.  Propagates CollinearPoints for degenerate
    postures; use `fallback_tongue_body_tvs` in that case.
    """
    circle = tongue_body_circle(frame)
    res = circle_polyline_clearance(circle, anat.extended_palate)
    tbcd = res.distance
    if options.clamp_tbcd and tbcd < 0.0:
        tbcd = 0.0
    tbcl = angle_from_reference(anat.reference_center, res.closest_object_point)
    return tbcd, tbcl


def fallback_tongue_body_tvs(
    frame: PelletFrame, anat: SpeakerAnatomy
) -> tuple[float, float]:
    """(TBCD, TBCL) for a collinear tongue posture.

    With no circle available, the clearance degenerates to the smallest
    pellet-to-trace distance over T2, T3, T4, and the location to the
    angle of the attaining pellet.
    """
    best = None
    best_pellet = None
    for name in ("T2", "T3", "T4"):
        p = frame.pellet(name)
        res = point_polyline_clearance(p, anat.extended_palate)
        if best is None or res.distance < best:
            best = res.distance
            best_pellet = p
    assert best is not None and best_pellet is not None
    return best, angle_from_reference(anat.reference_center, best_pellet)


def compute_tongue_tip_tvs(
    frame: PelletFrame, anat: SpeakerAnatomy
) -> tuple[float, float]:
    """(TTCD, TTCL): T1 clearance to the extended palate and its angle."""
    res = point_polyline_clearance(frame.t1, anat.extended_palate)
    ttcl = angle_from_reference(anat.reference_center, frame.t1)
    return res.distance, ttcl


def compute_frame(
    frame: PelletFrame,
    anat: SpeakerAnatomy,
    options: TvOptions = _DEFAULT_OPTIONS,
) -> TractVariableFrame:
    """All six tract variables for one pellet frame.

    Each variable is computed when its pellets are valid and left absent
    otherwise.  Quality is MISSING_PELLET when any required pellet is
    invalid, DEGENERATE_TONGUE when the collinear fallback was engaged,
    OK otherwise.
    """
    valid = frame.valid
    la = lp = tbcl = tbcd = ttcl = ttcd = None
    degenerate = False

    if "UL" in valid:
        lp = compute_lp(frame)
        if "LL" in valid:
            la = compute_la(frame)

    if "T2" in valid and "T3" in valid and "T4" in valid:
        try:
            tbcd, tbcl = compute_tongue_body_tvs(frame, anat, options)
        except CollinearPoints:
            degenerate = True
            tbcd, tbcl = fallback_tongue_body_tvs(frame, anat)

    if "T1" in valid:
        ttcd, ttcl = compute_tongue_tip_tvs(frame, anat)

    if any(name not in valid for name in REQUIRED_PELLETS):
        quality = Quality.MISSING_PELLET
    elif degenerate:
        quality = Quality.DEGENERATE_TONGUE
    else:
        quality = Quality.OK

    return TractVariableFrame(
        t=frame.t,
        la=la,
        lp=lp,
        tbcl=tbcl,
        tbcd=tbcd,
        ttcl=ttcl,
        ttcd=ttcd,
        quality=quality,
    )


def compute_trajectory(
    trajectory: PelletTrajectory,
    anat: SpeakerAnatomy,
    options: TvOptions = _DEFAULT_OPTIONS,
) -> TvTrajectory:
    """Tract variables for every frame of a pellet trajectory.

    A pure map: frame i of the output depends only on frame i of the
    input and the anatomy, so results are identical no matter how the
    work is ordered or parallelized.
    """
    frames = tuple(compute_frame(f, anat, options) for f in trajectory.frames)
    return TvTrajectory(
        speaker_id=trajectory.speaker_id,
        frames=frames,
        sample_rate=trajectory.native_rate,
    )
