"""Equidistant-line-segment and bearing-difference cost functions.

Besides the scalar functions that follow the textbook definitions one
candidate at a time, this module has batched versions that evaluate a
whole grid of candidates with numpy broadcasting. The estimator uses the
batched ones; tests check them against the scalar ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateTrack, NearParallel, ShapeError,
                     SingularCandidate)
from .geometry import (Position, bearing_deg, initial_target_position,
                       intersect_bearing_with_track, track_offsets, unit)
from .scenario import BearingSeries, Scenario, TargetParams, ownship_track

EPS_DIST = 1e-3


@dataclass(frozen=True)
class CandidateTrack:
    r0: float
    course: float

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError(f"candidate r0 must be > 0, got {self.r0}")


@dataclass(frozen=True)
class SegmentStats:
    intersection_points: list[Position]
    segment_lengths: np.ndarray
    d_mean: float


def segment_stats(series: BearingSeries, candidate: CandidateTrack,
                  ownship_start: Position, b0_hint: float) -> SegmentStats:
    """Cut the candidate track with every measured bearing line.

    The candidate track starts at ``r0`` along ``b0_hint`` from
    ``ownship_start`` and heads along ``candidate.course``.
    """
    if len(series) < 3:
        raise ShapeError(f"need at least 3 bearings, got {len(series)}")
    anchor = initial_target_position(ownship_start, b0_hint, candidate.r0)
    points = []
    for pos, b in zip(series.ownship_positions, series.measured_bearings):
        try:
            points.append(intersect_bearing_with_track(pos, float(b), anchor,
                                                       candidate.course))
        except NearParallel as exc:
            raise SingularCandidate(str(exc)) from exc
    lengths = np.array([p.distance(q) for p, q in zip(points[:-1], points[1:])])
    d_mean = float(lengths.sum() / len(lengths))
    if d_mean < EPS_DIST:
        raise DegenerateTrack(f"mean segment length {d_mean} m below {EPS_DIST} m")
    return SegmentStats(points, lengths, d_mean)


def equidistant_from_lengths(lengths) -> float:
    lengths = np.asarray(lengths, dtype=float)
    d_mean = lengths.sum() / len(lengths)
    if not d_mean > EPS_DIST:
        raise DegenerateTrack(f"mean segment length {d_mean} m below {EPS_DIST} m")
    return float(np.sum(np.abs((lengths - d_mean) / d_mean)))


def cost_equidistant(stats: SegmentStats) -> float:
    """Sum of absolute segment deviations, each normalised by the mean."""
    return equidistant_from_lengths(stats.segment_lengths)


def derive_speed(stats: SegmentStats, ts: float) -> float:
    """Speed implied by the total intersected distance over the elapsed time."""
    if not ts > 0:
        raise ValueError(f"ts must be > 0, got {ts}")
    n_seg = len(stats.segment_lengths)
    if n_seg < 1:
        raise ShapeError("need at least one segment")
    return float(np.sum(stats.segment_lengths) / (n_seg * ts))


def cost_bearing_diff(measured, estimated) -> float:
    """Root of the summed squared bearing residuals, in degrees.

    Residuals are wrapped to (-180, 180] first so a track crossing North
    is not penalised by 360 deg.
    """
    m = np.asarray(measured, dtype=float)
    e = np.asarray(estimated, dtype=float)
    if m.shape != e.shape:
        raise ShapeError(f"length mismatch: {m.shape} vs {e.shape}")
    if m.size == 0:
        raise ShapeError("empty bearing series")
    d = 180.0 - np.mod(180.0 - (m - e), 360.0)
    return float(np.sqrt(np.sum(d * d)))


def predicted_bearings(params: TargetParams, scenario: Scenario,
                       anchor_b0: float | None = None) -> np.ndarray:
    """Bearings the ownship would see if the target moved per ``params``.

    The candidate starts ``params.r0`` along ``anchor_b0`` (default: the
    scenario's true initial bearing).
    """
    b0 = scenario.b0 if anchor_b0 is None else anchor_b0
    t = scenario.times
    ox, oy = ownship_track(scenario, t)
    p0 = initial_target_position(scenario.ownship_start, b0, params.r0)
    sx, cy = unit(params.course)
    dx = p0.x + params.speed * sx * t - ox
    dy = p0.y + params.speed * cy * t - oy
    return bearing_deg(dx, dy)


# -- batched grid evaluation ------------------------------------------------

def equidistant_grid(series: BearingSeries, ownship_start: Position, anchor_b0: float,
                     r0s, courses) -> tuple[np.ndarray, np.ndarray]:
    """Equidistant cost and mean segment length for every (r0, course) pair.

    Returns two arrays of shape ``(len(r0s), len(courses))``. Singular or
    degenerate candidates get ``inf`` cost.
    """
    r0s = np.asarray(r0s, dtype=float)[:, None, None]
    courses = np.asarray(courses, dtype=float)[None, :, None]
    bx, by = unit(anchor_b0)
    px = ownship_start.x + r0s * bx
    py = ownship_start.y + r0s * by
    s, _ = track_offsets(series.ownship_x, series.ownship_y,
                         series.measured_bearings, px, py, courses)
    # all intersections lie on one line, so segment length is the offset step
    lengths = np.abs(np.diff(s, axis=-1))
    d_mean = lengths.mean(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        cost = np.abs(lengths - d_mean[..., None]).sum(axis=-1) / d_mean
    bad = ~np.isfinite(cost) | ~(d_mean > EPS_DIST)
    cost = np.where(bad, np.inf, cost)
    return cost, d_mean


def bearing_diff_grid(series: BearingSeries, ownship_start: Position, anchor_b0: float,
                      r0s, courses, speeds) -> np.ndarray:
    """Bearing-difference cost on the full (r0, course, speed) grid."""
    r0s = np.asarray(r0s, dtype=float)
    courses = np.asarray(courses, dtype=float)
    speeds = np.asarray(speeds, dtype=float)
    t = series.times
    # residual = signed angle from predicted line of sight to measured one,
    # atan2(m x p, m . p), already wrapped to (-pi, pi]
    sm, cm = unit(series.measured_bearings)
    bx, by = unit(anchor_b0)
    ux, uy = unit(courses)
    # (course, speed, k) position of the candidate relative to the ownship,
    # minus the r0-dependent start offset
    vt = speeds[:, None] * t[None, :]
    ex = ux[:, None, None] * vt[None] - (series.ownship_x - ownship_start.x)
    ey = uy[:, None, None] * vt[None] - (series.ownship_y - ownship_start.y)
    out = np.empty((len(r0s), len(courses), len(speeds)))
    for i, r0 in enumerate(r0s):
        x = ex + r0 * bx
        y = ey + r0 * by
        d = np.arctan2(sm * y - cm * x, sm * x + cm * y)
        np.square(d, out=d)
        out[i] = d.sum(axis=-1)
    return np.degrees(np.sqrt(out))
