"""Coordinate-transformation bias of the equidistant segment length.

A two-sample engagement (ownship and target each move once, ``ts``
seconds apart) is observed with two independent noisy bearings. Each
noisy bearing is turned back into a Cartesian target position, the
distance between the two positions is one segment sample, and the shape
of many such samples is summarised by its kurtosis.

Two transforms are available:

``polar``
    ``ownship + true_range * (sin b, cos b)``: the classic polar to
    Cartesian mapping, using the true range at each sample time.
``track``
    the noisy bearing line intersected with the true target track line.
    Draws where the line runs parallel to the track are rejected and
    redrawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DegenerateDistribution, NearParallel, TMAError
from .geometry import bearing_deg, track_offsets, unit
from .rng import derive_seed, make_rng

MIN_RUNS = 1000
REJECT_WARN_FRACTION = 0.01
TRANSFORMS = ("polar", "track")


class RejectedDraw(NearParallel):
    """A noisy bearing line ran parallel to the target track."""


@dataclass(frozen=True)
class BiasConfig:
    r0: float = 5000.0
    b0: float = 45.0
    target_course: float = 30.0
    target_speed: float = 5.0
    ownship_course: float = 90.0
    ownship_speed: float = 5.0
    ts: float = 35.0
    noise_sigma: float = 1.0
    runs: int = 100_000
    transform: str = "polar"
    bins: int = 100

    def __post_init__(self):
        if not self.r0 > 0:
            raise ConfigError(f"r0 must be > 0, got {self.r0}", field="r0")
        if not self.ts > 0:
            raise ConfigError(f"ts must be > 0, got {self.ts}", field="ts")
        if self.target_speed < 0 or self.ownship_speed < 0:
            raise ConfigError("speeds must be >= 0", field="target_speed")
        if not self.noise_sigma >= 0:
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}",
                              field="noise_sigma")
        if self.runs < MIN_RUNS:
            raise ConfigError(f"runs must be >= {MIN_RUNS} for a reportable kurtosis, "
                              f"got {self.runs}", field="runs")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"transform must be one of {TRANSFORMS}, got "
                              f"{self.transform!r}", field="transform")
        if self.bins < 1:
            raise ConfigError(f"bins must be >= 1, got {self.bins}", field="bins")


@dataclass
class BiasReport:
    runs_kept: int
    runs_rejected: int
    mean: float
    std: float
    kurtosis: float
    bin_edges: np.ndarray
    counts: np.ndarray
    samples: np.ndarray = field(repr=False)

    @property
    def geometry_warning(self) -> bool:
        total = self.runs_kept + self.runs_rejected
        return self.runs_rejected > REJECT_WARN_FRACTION * total


def kurtosis(samples) -> float:
    """Fourth standardised central moment ``m4 / m2**2``.

    Population moments, no small-sample correction; a Gaussian gives 3.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 4:
        raise ValueError(f"need at least 4 samples, got {x.size}")
    d = x - x.mean()
    d2 = d * d
    m2 = d2.mean()
    scale = max(abs(x.mean()), np.abs(x).max())
    # identical samples leave only rounding noise in d
    if m2 <= (1e-12 * scale) ** 2 or m2 == 0.0:
        raise DegenerateDistribution("sample variance is zero")
    m4 = (d2 * d2).mean()
    return float(m4 / (m2 * m2))


def _geometry(config: BiasConfig):
    """Ownship and target positions at both sample times, shape (2,)."""
    ox = np.array([0.0, 0.0])
    oy = np.array([0.0, 0.0])
    sx, cy = unit(config.ownship_course)
    ox[1] = config.ownship_speed * config.ts * sx
    oy[1] = config.ownship_speed * config.ts * cy
    bx, by = unit(config.b0)
    ux, uy = unit(config.target_course)
    tx = config.r0 * bx + config.target_speed * config.ts * ux * np.array([0.0, 1.0])
    ty = config.r0 * by + config.target_speed * config.ts * uy * np.array([0.0, 1.0])
    return ox, oy, tx, ty


def _segments(config: BiasConfig, noise: np.ndarray) -> np.ndarray:
    """Segment length for each row of bearing noise (degrees), shape (m, 2).

    Rejected (parallel) draws come back as ``nan``.
    """
    ox, oy, tx, ty = _geometry(config)
    true_b = bearing_deg(tx - ox, ty - oy)
    noisy = true_b + noise
    if config.transform == "polar":
        rho = np.hypot(tx - ox, ty - oy)
        sx, cy = unit(noisy)
        px = ox + rho * sx
        py = oy + rho * cy
        return np.hypot(px[:, 1] - px[:, 0], py[:, 1] - py[:, 0])
    s, _ = track_offsets(ox, oy, noisy, tx[0], ty[0], config.target_course)
    # both points sit on the same track line
    return np.abs(s[:, 1] - s[:, 0])


def segment_sample(config: BiasConfig, seed: int) -> float:
    """One segment length (m) from a single pair of noisy bearings."""
    noise = config.noise_sigma * make_rng(seed).standard_normal((1, 2))
    seg = float(_segments(config, noise)[0])
    if math.isnan(seg):
        raise RejectedDraw("noisy bearing parallel to target track")
    return seg


def histogram(samples: np.ndarray, bins: int = 100):
    """``bins`` equal bins on ``[0, mean + 6 std]`` plus one overflow bin.

    Returns ``(edges, counts)`` with ``len(edges) == bins + 2``; the last
    edge is ``inf``.
    """
    hi = float(samples.mean() + 6 * samples.std())
    if not hi > 0:
        hi = 1.0
    edges = np.linspace(0.0, hi, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    overflow = int(np.count_nonzero(samples > hi))
    # np.histogram's last bin is closed, so values equal to hi stay inside
    return np.append(edges, np.inf), np.append(counts, overflow)


def collect_segments(config: BiasConfig, seed: int, batch: int = 50_000):
    """Draw ``config.runs`` accepted samples. Returns ``(samples, rejected)``."""
    rng = make_rng(seed)
    kept, rejected, have = [], 0, 0
    attempts = 0
    while have < config.runs:
        m = min(batch, config.runs - have) if rejected == 0 else batch
        seg = _segments(config, config.noise_sigma * rng.standard_normal((m, 2)))
        ok = ~np.isnan(seg)
        rejected += int(np.count_nonzero(~ok))
        kept.append(seg[ok])
        have += int(np.count_nonzero(ok))
        attempts += m
        if attempts > 100 * config.runs:
            raise TMAError(f"geometry rejects almost every draw ({rejected} of {attempts})")
    return np.concatenate(kept)[: config.runs], rejected


def bias_experiment(config: BiasConfig, seed: int) -> BiasReport:
    """Empirical segment-length distribution and its kurtosis.

    Raises
    ------
    DegenerateDistribution
        When all samples are equal (e.g. ``noise_sigma == 0``).
    """
    samples, rejected = collect_segments(config, seed)
    kappa = kurtosis(samples)
    edges, counts = histogram(samples, config.bins)
    return BiasReport(runs_kept=len(samples), runs_rejected=rejected,
                      mean=float(samples.mean()), std=float(samples.std()),
                      kurtosis=kappa, bin_edges=edges, counts=counts, samples=samples)


@dataclass
class SweepPoint:
    r0: float
    report: BiasReport | None
    error: str | None = None

    @property
    def kurtosis(self) -> float:
        return self.report.kurtosis if self.report is not None else math.nan


def range_sweep(config: BiasConfig, r0_values, seed: int) -> list[SweepPoint]:
    """One bias experiment per range; point ``i`` uses ``derive_seed(seed, i)``.

    A failing point is recorded and the sweep continues.
    """
    r0_values = list(r0_values)
    if not r0_values:
        raise ValueError("r0_values is empty")
    out = []
    for i, r0 in enumerate(r0_values):
        cfg = replace(config, r0=float(r0))
        try:
            out.append(SweepPoint(float(r0), bias_experiment(cfg, derive_seed(seed, i))))
        except TMAError as exc:
            out.append(SweepPoint(float(r0), None, f"{type(exc).__name__}: {exc}"))
    return out

