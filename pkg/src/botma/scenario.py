"""Target/ownship trajectories and noisy bearing generation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DegenerateGeometry, OutOfWindow
from .rng import make_rng
from .geometry import (Position, bearing_deg, initial_target_position,
                       propagate, unit, wrap360)


@dataclass(frozen=True)
class TargetParams:
    r0: float
    course: float
    speed: float

    def __post_init__(self):
        if not self.r0 > 0:
            raise ConfigError(f"r0 must be > 0, got {self.r0}", field="r0")
        if not self.speed >= 0:
            raise ConfigError(f"speed must be >= 0, got {self.speed}", field="speed")

    def as_tuple(self):
        return (self.r0, self.course, self.speed)


@dataclass(frozen=True)
class OwnshipLeg:
    course: float
    speed: float
    duration: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError(f"leg duration must be > 0, got {self.duration}",
                              field="duration")
        if not self.speed >= 0:
            raise ConfigError(f"leg speed must be >= 0, got {self.speed}", field="speed")


@dataclass(frozen=True)
class Scenario:
    """Complete engagement geometry.

    ``b0`` is the true initial bearing from ``ownship_start`` to the target,
    ``ts`` the sampling interval (s), ``n`` the number of bearings and
    ``noise_sigma`` the bearing noise standard deviation (deg).
    """

    b0: float
    target: TargetParams
    legs: tuple[OwnshipLeg, ...]
    ownship_start: Position = Position(0.0, 0.0)
    ts: float = 10.0
    n: int = 120
    noise_sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(self.legs))
        if not self.legs:
            raise ConfigError("at least one ownship leg is required", field="legs")
        if self.n < 3:
            raise ConfigError(f"n must be >= 3, got {self.n}", field="n")
        if not self.ts > 0:
            raise ConfigError(f"ts must be > 0, got {self.ts}", field="ts")
        if not self.noise_sigma >= 0:
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}",
                              field="noise_sigma")
        need = (self.n - 1) * self.ts
        if self.duration < need - 1e-9:
            raise ConfigError(
                f"legs last {self.duration} s but {self.n} samples at ts={self.ts} "
                f"need {need} s", field="legs")

    @property
    def duration(self) -> float:
        return float(sum(leg.duration for leg in self.legs))

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.ts

    @property
    def target_start(self) -> Position:
        return initial_target_position(self.ownship_start, self.b0, self.target.r0)


@dataclass(frozen=True)
class BearingSeries:
    times: np.ndarray
    true_bearings: np.ndarray
    measured_bearings: np.ndarray
    ownship_x: np.ndarray
    ownship_y: np.ndarray
    # per-sample noise actually drawn, degrees
    noise: np.ndarray = field(repr=False, default=None)

    def __len__(self):
        return len(self.times)

    @property
    def ownship_positions(self) -> list[Position]:
        return [Position(float(x), float(y)) for x, y in zip(self.ownship_x, self.ownship_y)]


def _leg_table(scenario: Scenario):
    """Start times, start points and velocities of each leg."""
    starts, points, vels = [], [], []
    t, x, y = 0.0, scenario.ownship_start.x, scenario.ownship_start.y
    for leg in scenario.legs:
        sx, cy = unit(leg.course)
        vx, vy = leg.speed * float(sx), leg.speed * float(cy)
        starts.append(t)
        points.append((x, y))
        vels.append((vx, vy))
        x += vx * leg.duration
        y += vy * leg.duration
        t += leg.duration
    return np.array(starts), np.array(points), np.array(vels)


def ownship_track(scenario: Scenario, times) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ownship x/y at ``times`` (piecewise constant velocity)."""
    t = np.asarray(times, dtype=float)
    if np.any(t < 0) or np.any(t > scenario.duration + 1e-9):
        raise OutOfWindow(f"time outside [0, {scenario.duration}] s")
    starts, points, vels = _leg_table(scenario)
    idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
    dt = t - starts[idx]
    return points[idx, 0] + vels[idx, 0] * dt, points[idx, 1] + vels[idx, 1] * dt


def ownship_position_at(scenario: Scenario, t: float) -> Position:
    x, y = ownship_track(scenario, t)
    return Position(float(x), float(y))


def target_track(scenario: Scenario, times, params: TargetParams | None = None,
                 b0: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Target x/y at ``times`` for ``params`` anchored on bearing ``b0``.

    Defaults to the scenario's true parameters and true initial bearing.
    """
    params = scenario.target if params is None else params
    b0 = scenario.b0 if b0 is None else b0
    p0 = initial_target_position(scenario.ownship_start, b0, params.r0)
    t = np.asarray(times, dtype=float)
    sx, cy = unit(params.course)
    return p0.x + params.speed * sx * t, p0.y + params.speed * cy * t


def target_position_at(scenario: Scenario, t: float) -> Position:
    if t < 0:
        raise OutOfWindow(f"negative time {t}")
    return propagate(scenario.target_start, scenario.target.course,
                     scenario.target.speed, t)


def generate_bearings(scenario: Scenario, seed: int) -> BearingSeries:
    """Sample ``n`` true bearings every ``ts`` seconds and add Gaussian noise.

    The output is a pure function of ``(scenario, seed)``.
    """
    t = scenario.times
    ox, oy = ownship_track(scenario, t)
    tx, ty = target_track(scenario, t)
    dx, dy = tx - ox, ty - oy
    if np.any((dx == 0.0) & (dy == 0.0)):
        k = int(np.flatnonzero((dx == 0.0) & (dy == 0.0))[0])
        raise DegenerateGeometry(f"target and ownship coincide at t={t[k]} s")
    true = bearing_deg(dx, dy)
    if scenario.noise_sigma == 0:
        noise = np.zeros_like(true)
        measured = true.copy()
    else:
        noise = scenario.noise_sigma * make_rng(seed).standard_normal(scenario.n)
        measured = wrap360(true + noise)
    return BearingSeries(times=t, true_bearings=true, measured_bearings=measured,
                         ownship_x=ox, ownship_y=oy, noise=noise)


def two_leg_scenario(r0: float, target_course: float, ownship_course: float, *,
                     b0: float = 45.0, target_speed: float = 5.0,
                     ownship_speed: float = 5.0, turn: float = -80.0,
                     ts: float = 10.0, n: int = 120,
                     noise_sigma: float = 1.0) -> Scenario:
    """Default S-turn engagement: two equal legs, the second turned by ``turn``."""
    half = n * ts / 2
    legs = (OwnshipLeg(wrap360(ownship_course), ownship_speed, half),
            OwnshipLeg(wrap360(ownship_course + turn), ownship_speed, half))
    return Scenario(b0=b0, target=TargetParams(r0, target_course, target_speed),
                    legs=legs, ts=ts, n=n, noise_sigma=noise_sigma)
