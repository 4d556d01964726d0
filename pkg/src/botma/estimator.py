"""Exhaustive grid-search estimation and Monte Carlo averaging."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .costs import bearing_diff_grid, equidistant_grid
from .errors import EmptySearchSpace, NoFeasibleCandidate, TMAError
from .geometry import wrap180
from .rng import derive_seed
from .scenario import (BearingSeries, Scenario, TargetParams, generate_bearings,
                       target_track)

TIE_RTOL = 1e-12


class CostKind(str, Enum):
    BEARING_DIFF = "bearing-diff"
    EQUIDISTANT = "equidistant"


class Anchor(str, Enum):
    TRUE_B0 = "true_b0"
    MEASURED_B0 = "measured_b0"


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise EmptySearchSpace(f"step must be > 0, got {self.step}")
        if self.lo > self.hi:
            raise EmptySearchSpace(f"lo {self.lo} > hi {self.hi}")

    def values(self) -> np.ndarray:
        # points lo + i*step with lo + i*step <= hi + step/2
        count = math.floor((self.hi - self.lo) / self.step + 0.5) + 1
        return np.round(self.lo + self.step * np.arange(count), 9)


@dataclass(frozen=True)
class SearchSpace:
    r0: Axis
    course: Axis
    speed: Axis

    @classmethod
    def around(cls, truth: TargetParams, *, r0_half=1000.0, r0_step=10.0,
               course_half=2.0, course_step=0.1, speed=(1.0, 20.0),
               speed_step=0.1) -> SearchSpace:
        """Default window centred on the true parameters."""
        return cls(Axis(truth.r0 - r0_half, truth.r0 + r0_half, r0_step),
                   Axis(truth.course - course_half, truth.course + course_half, course_step),
                   Axis(speed[0], speed[1], speed_step))

    def grids(self):
        return self.r0.values(), self.course.values(), self.speed.values()


@dataclass
class EstimationResult:
    best: TargetParams
    cost: float
    param_error: tuple[float, float, float]
    rms_error: float
    cells_evaluated: int


@dataclass
class MonteCarloSummary:
    runs: int
    mean_param_error: tuple[float, float, float]
    mean_rms_error: float
    per_run: list[EstimationResult | None]
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def succeeded(self) -> int:
        return self.runs - len(self.failures)


def param_error(true_params: TargetParams, est: TargetParams) -> tuple[float, float, float]:
    """Component-wise ``est - true``; the course difference is wrapped."""
    return (est.r0 - true_params.r0,
            wrap180(est.course - true_params.course),
            est.speed - true_params.speed)


def rms_trajectory_error(scenario: Scenario, est: TargetParams) -> float:
    """RMS distance between true and estimated tracks at the sample times.

    Both tracks start from the scenario's true initial bearing.
    """
    t = scenario.times
    tx, ty = target_track(scenario, t)
    ex, ey = target_track(scenario, t, params=est)
    return float(np.sqrt(np.mean((tx - ex) ** 2 + (ty - ey) ** 2)))


def argmin_lexicographic(cost: np.ndarray) -> tuple[int, ...]:
    """Index of the smallest cost; ties go to the lowest C-order index.

    Costs within ``TIE_RTOL`` (relative) of the minimum count as ties. With
    ascending axis grids the lowest C-order index is the lexicographically
    smallest parameter tuple.
    """
    best = np.min(cost)
    if not np.isfinite(best):
        raise NoFeasibleCandidate("every grid cell has infinite cost")
    tied = cost <= best + TIE_RTOL * abs(best)
    return np.unravel_index(int(np.argmax(tied)), cost.shape)


def _anchor_bearing(scenario: Scenario, series: BearingSeries, anchor) -> float:
    anchor = Anchor(anchor)
    if anchor is Anchor.TRUE_B0:
        return scenario.b0
    return float(series.measured_bearings[0])


def _map_rows(fn, rows, workers):
    if workers is None or workers <= 1 or len(rows) < 2:
        return [fn(rows)]
    chunks = np.array_split(rows, min(workers, len(rows)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def grid_search(scenario: Scenario, series: BearingSeries, space: SearchSpace,
                cost_kind=CostKind.BEARING_DIFF, anchor=Anchor.TRUE_B0,
                workers: int | None = None) -> EstimationResult:
    """Brute-force minimum of a cost over the whole search grid.

    Bearing-difference searches all of (r0, course, speed). Equidistant
    searches (r0, course) and takes the speed from the winning cell's mean
    segment length.
    """
    cost_kind = CostKind(cost_kind)
    r0s, courses, speeds = space.grids()
    if min(len(r0s), len(courses), len(speeds)) == 0:
        raise EmptySearchSpace("search grid has no cells")
    b0 = _anchor_bearing(scenario, series, anchor)

    if cost_kind is CostKind.BEARING_DIFF:
        parts = _map_rows(lambda rows: bearing_diff_grid(
            series, scenario.ownship_start, b0, rows, courses, speeds), r0s, workers)
        cost = np.concatenate(parts, axis=0)
        i, j, k = argmin_lexicographic(cost)
        best = TargetParams(float(r0s[i]), float(courses[j]), float(speeds[k]))
        value = float(cost[i, j, k])
    else:
        parts = _map_rows(lambda rows: equidistant_grid(
            series, scenario.ownship_start, b0, rows, courses), r0s, workers)
        cost = np.concatenate([p[0] for p in parts], axis=0)
        d_mean = np.concatenate([p[1] for p in parts], axis=0)
        i, j = argmin_lexicographic(cost)
        speed = float(d_mean[i, j] / scenario.ts)
        best = TargetParams(float(r0s[i]), float(courses[j]), speed)
        value = float(cost[i, j])

    return EstimationResult(best=best, cost=value,
                            param_error=param_error(scenario.target, best),
                            rms_error=rms_trajectory_error(scenario, best),
                            cells_evaluated=int(cost.size))


def summarize(per_run: list[EstimationResult | None],
              failures: dict[int, str] | None = None) -> MonteCarloSummary:
    ok = [r for r in per_run if r is not None]
    if ok:
        mean_err = tuple(float(np.mean([abs(r.param_error[c]) for r in ok])) for c in range(3))
        mean_rms = float(np.mean([r.rms_error for r in ok]))
    else:
        mean_err, mean_rms = (math.nan,) * 3, math.nan
    return MonteCarloSummary(runs=len(per_run), mean_param_error=mean_err,
                             mean_rms_error=mean_rms, per_run=list(per_run),
                             failures=dict(failures or {}))


def monte_carlo(scenario: Scenario, space: SearchSpace, cost_kind, runs: int,
                base_seed: int, anchor=Anchor.TRUE_B0,
                workers: int | None = None) -> MonteCarloSummary:
    """Repeat noisy bearing generation + grid search ``runs`` times.

    A run whose search fails is recorded in ``failures`` and left out of the
    means.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")

    def one(i):
        series = generate_bearings(scenario, derive_seed(base_seed, i))
        try:
            return grid_search(scenario, series, space, cost_kind, anchor), None
        except TMAError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, range(runs)))
    else:
        outcomes = [one(i) for i in range(runs)]
    per_run = [res for res, _ in outcomes]
    failures = {i: msg for i, (_, msg) in enumerate(outcomes) if msg is not None}
    return summarize(per_run, failures)
