"""Planar kinematics on an East/North grid.

Angles cross the public API in degrees measured clockwise from North
(the positive y axis). A unit vector for such an angle is
``(sin a, cos a)``, so East is 90 deg and West is 270 deg.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry, InvalidRange, NearParallel

EPS_PARALLEL = 1e-6


@dataclass(frozen=True, slots=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite position ({self.x}, {self.y})")

    def __sub__(self, other: Position) -> Position:
        return Position(self.x - other.x, self.y - other.y)

    def __add__(self, other: Position) -> Position:
        return Position(self.x + other.x, self.y + other.y)

    def distance(self, other: Position) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True, slots=True)
class Velocity:
    vx: float
    vy: float

    def __post_init__(self):
        if not (math.isfinite(self.vx) and math.isfinite(self.vy)):
            raise ValueError(f"non-finite velocity ({self.vx}, {self.vy})")

    @classmethod
    def from_course(cls, course: float, speed: float) -> Velocity:
        c = math.radians(course)
        return cls(speed * math.sin(c), speed * math.cos(c))


def wrap360(angle):
    """Map degrees onto [0, 360). Works on scalars and arrays."""
    out = np.mod(angle, 360.0)
    # np.mod(-1e-17, 360) rounds to 360.0
    out = np.where(out >= 360.0, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


def wrap180(angle):
    """Map degrees onto (-180, 180]."""
    out = 180.0 - np.mod(180.0 - np.asarray(angle, dtype=float), 360.0)
    return float(out) if np.ndim(out) == 0 else out


def unit(angle_deg):
    """North-clockwise unit vector(s) ``(sin a, cos a)`` for degrees."""
    a = np.radians(angle_deg)
    return np.sin(a), np.cos(a)


def bearing_deg(dx, dy):
    """Vectorised bearing of the offset ``(dx, dy)``, in [0, 360)."""
    return wrap360(np.degrees(np.arctan2(dx, dy)))


def bearing_of(observer: Position, target: Position) -> float:
    """Bearing from ``observer`` to ``target`` in degrees, North-clockwise.

    Raises
    ------
    DegenerateGeometry
        If both points coincide.
    """
    dx = target.x - observer.x
    dy = target.y - observer.y
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometry(f"observer and target coincide at {observer}")
    return bearing_deg(dx, dy)


def initial_target_position(ownship0: Position, b0: float, r0: float) -> Position:
    """Place the target ``r0`` metres from ``ownship0`` along bearing ``b0``."""
    if not r0 > 0:
        raise InvalidRange(f"initial range must be positive, got {r0}")
    sx, cy = unit(b0)
    return Position(ownship0.x + r0 * float(sx), ownship0.y + r0 * float(cy))


def propagate(p0: Position, course: float, speed: float, t: float) -> Position:
    """Constant-velocity displacement of ``p0`` after ``t`` seconds."""
    if speed < 0:
        raise ValueError(f"speed must be >= 0, got {speed}")
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    sx, cy = unit(course)
    d = t * speed
    return Position(p0.x + d * float(sx), p0.y + d * float(cy))


def intersect_bearing_with_track(ray_origin: Position, bearing: float,
                                 track_point: Position,
                                 track_course: float) -> Position:
    """Intersection of a bearing line with a straight track line.

    Both lines are infinite: the bearing line passes through
    ``ray_origin`` with direction ``bearing`` and the track passes
    through ``track_point`` with direction ``track_course``.

    Raises
    ------
    NearParallel
        If ``|sin(bearing - track_course)| < EPS_PARALLEL``.
    """
    dx, dy = (float(v) for v in unit(bearing))
    ux, uy = (float(v) for v in unit(track_course))
    den = ux * dy - uy * dx
    if abs(den) < EPS_PARALLEL:
        raise NearParallel(
            f"bearing {bearing} deg is parallel to track course {track_course} deg")
    wx = ray_origin.x - track_point.x
    wy = ray_origin.y - track_point.y
    s = (wx * dy - wy * dx) / den
    return Position(track_point.x + s * ux, track_point.y + s * uy)


def track_offsets(origin_x, origin_y, bearing, point_x, point_y, course):
    """Signed along-track offsets of bearing-line/track-line intersections.

    Array version of :func:`intersect_bearing_with_track`. Returns
    ``(s, den)`` where the intersection is ``point + s * unit(course)`` and
    ``den = sin(course - bearing)``. Entries with ``|den| < EPS_PARALLEL``
    come back as ``nan`` in ``s``. All inputs broadcast.
    """
    dx, dy = unit(bearing)
    ux, uy = unit(course)
    den = ux * dy - uy * dx
    wx = np.asarray(origin_x) - point_x
    wy = np.asarray(origin_y) - point_y
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (wx * dy - wy * dx) / den
    s = np.where(np.abs(den) < EPS_PARALLEL, np.nan, s)
    return s, den
