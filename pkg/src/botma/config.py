"""INI-style scenario and bias configuration files.

Scenario file::

    [scenario]
    b0 = 45              ; deg, true initial bearing
    r0 = 5000            ; m
    target_course = 170  ; deg
    target_speed = 5     ; m/s
    ownship_x = 0        ; m (optional, default 0)
    ownship_y = 0        ; m (optional, default 0)
    ts = 10              ; s
    n = 120
    noise_sigma = 1      ; deg

    [leg 1]              ; legs are flown in numeric order
    course = 100
    speed = 5
    duration = 600

    [leg 2]
    course = 20
    speed = 5
    duration = 600

    [search]             ; optional, defaults centred on the truth
    r0 = 4000, 6000, 10  ; lo, hi, step
    course = 168, 172, 0.1
    speed = 1, 20, 0.1
    anchor = true_b0     ; or measured_b0

Bias file::

    [bias]
    r0 = 5000
    b0 = 45
    target_course = 30
    target_speed = 5
    ownship_course = 90
    ownship_speed = 5
    ts = 35
    noise_sigma = 1
    runs = 100000
    transform = polar    ; or track
    bins = 100

    [sweep]              ; optional: range sweep instead of a single point
    r0 = 5000, 25000, 50000, 100000
    ; or:  r0_range = 5000, 100000, 1000

Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .biaslab import BiasConfig
from .errors import ConfigError, TMAError
from .estimator import Anchor, Axis, SearchSpace
from .geometry import Position
from .scenario import OwnshipLeg, Scenario, TargetParams

SCENARIO_KEYS = {"b0", "r0", "target_course", "target_speed", "ownship_x",
                 "ownship_y", "ts", "n", "noise_sigma"}
SCENARIO_REQUIRED = {"b0", "r0", "target_course", "target_speed"}
LEG_KEYS = {"course", "speed", "duration"}
SEARCH_KEYS = {"r0", "course", "speed", "anchor"}
BIAS_KEYS = {"r0", "b0", "target_course", "target_speed", "ownship_course",
             "ownship_speed", "ts", "noise_sigma", "runs", "transform", "bins"}
SWEEP_KEYS = {"r0", "r0_range"}
LEG_RE = re.compile(r"^leg\s+(\d+)$")


@dataclass(frozen=True)
class EstimateConfig:
    scenario: Scenario
    space: SearchSpace
    anchor: Anchor


@dataclass(frozen=True)
class BiasFile:
    config: BiasConfig
    sweep: tuple[float, ...] | None


class _Reader:
    """configparser wrapper that remembers where each key was written."""

    def __init__(self, path):
        self.path = Path(path)
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}", path=self.path) from exc
        self.cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"),
                                            interpolation=None)
        try:
            self.cp.read_string(text, source=str(self.path))
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(exc.message.splitlines()[0], line=line,
                              path=self.path) from exc
        self.lines = {}
        section = None
        for no, raw in enumerate(text.splitlines(), start=1):
            s = raw.strip()
            if s.startswith("[") and s.endswith("]"):
                section = s[1:-1].strip()
            elif section and "=" in s and not s.startswith((";", "#")):
                self.lines[(section, s.split("=", 1)[0].strip().lower())] = no

    def error(self, section, key, message):
        where = f"{section}.{key}" if key else section
        return ConfigError(message, field=where, line=self.lines.get((section, key)),
                           path=self.path)

    def check_keys(self, section, allowed, required=()):
        keys = set(self.cp[section].keys())
        for key in sorted(keys - set(allowed)):
            raise self.error(section, key, "unknown key")
        for key in sorted(set(required) - keys):
            raise self.error(section, key, "missing required key")

    def number(self, section, key, default=None, kind=float):
        if key not in self.cp[section]:
            if default is None:
                raise self.error(section, key, "missing required key")
            return default
        raw = self.cp[section][key]
        try:
            value = kind(raw)
        except ValueError:
            raise self.error(section, key, f"expected {kind.__name__}, got {raw!r}") from None
        if kind is float and not np.isfinite(value):
            raise self.error(section, key, f"value must be finite, got {raw!r}")
        return value

    def numbers(self, section, key, count=None):
        raw = self.cp[section][key]
        try:
            values = [float(v) for v in raw.split(",")]
        except ValueError:
            raise self.error(section, key, f"expected comma-separated numbers, got {raw!r}") from None
        if count is not None and len(values) != count:
            raise self.error(section, key, f"expected {count} values, got {len(values)}")
        return values

    def build(self, section, key, fn):
        """Run a constructor and pin any validation error on ``section.key``."""
        try:
            return fn()
        except ConfigError as exc:
            if exc.path is not None:
                raise
            sub = exc.field or key
            raise self.error(section, sub, str(exc).split(": ")[-1]) from None
        except TMAError as exc:
            raise self.error(section, key, str(exc)) from None


def load_scenario(path) -> EstimateConfig:
    """Parse a scenario file into a scenario, search space and anchor mode."""
    rd = _Reader(path)
    sections = rd.cp.sections()
    for name in sections:
        if name not in ("scenario", "search") and not LEG_RE.match(name):
            raise rd.error(name, None, "unknown section")
    if "scenario" not in sections:
        raise rd.error("scenario", None, "missing [scenario] section")
    rd.check_keys("scenario", SCENARIO_KEYS, SCENARIO_REQUIRED)
    g = lambda key, default=None, kind=float: rd.number("scenario", key, default, kind)

    legs = []
    for name in sorted((s for s in sections if LEG_RE.match(s)),
                       key=lambda s: int(LEG_RE.match(s).group(1))):
        rd.check_keys(name, LEG_KEYS, LEG_KEYS)
        legs.append(rd.build(name, "duration", lambda: OwnshipLeg(
            rd.number(name, "course"), rd.number(name, "speed"),
            rd.number(name, "duration"))))
    if not legs:
        raise rd.error("leg 1", None, "at least one [leg N] section is required")

    target = rd.build("scenario", "r0", lambda: TargetParams(
        g("r0"), g("target_course"), g("target_speed")))
    scenario = rd.build("scenario", "n", lambda: Scenario(
        b0=g("b0"), target=target, legs=tuple(legs),
        ownship_start=Position(g("ownship_x", 0.0), g("ownship_y", 0.0)),
        ts=g("ts", 10.0), n=g("n", 120, int), noise_sigma=g("noise_sigma", 1.0)))

    space = SearchSpace.around(target)
    anchor = Anchor.TRUE_B0
    if "search" in sections:
        rd.check_keys("search", SEARCH_KEYS)
        axes = {}
        for key in ("r0", "course", "speed"):
            if key in rd.cp["search"]:
                lo, hi, step = rd.numbers("search", key, 3)
                axes[key] = rd.build("search", key, lambda: Axis(lo, hi, step))
        space = SearchSpace(axes.get("r0", space.r0), axes.get("course", space.course),
                            axes.get("speed", space.speed))
        if "anchor" in rd.cp["search"]:
            raw = rd.cp["search"]["anchor"].strip()
            try:
                anchor = Anchor(raw)
            except ValueError:
                raise rd.error("search", "anchor",
                               f"expected true_b0 or measured_b0, got {raw!r}") from None
    return EstimateConfig(scenario, space, anchor)


def load_bias(path) -> BiasFile:
    rd = _Reader(path)
    sections = rd.cp.sections()
    for name in sections:
        if name not in ("bias", "sweep"):
            raise rd.error(name, None, "unknown section")
    if "bias" not in sections:
        raise rd.error("bias", None, "missing [bias] section")
    rd.check_keys("bias", BIAS_KEYS)
    d = BiasConfig()
    kw = {}
    for key in BIAS_KEYS - {"transform", "runs", "bins"}:
        kw[key] = rd.number("bias", key, getattr(d, key))
    kw["runs"] = rd.number("bias", "runs", d.runs, int)
    kw["bins"] = rd.number("bias", "bins", d.bins, int)
    kw["transform"] = rd.cp["bias"].get("transform", d.transform).strip()
    config = rd.build("bias", "runs", lambda: BiasConfig(**kw))

    sweep = None
    if "sweep" in sections:
        rd.check_keys("sweep", SWEEP_KEYS)
        keys = set(rd.cp["sweep"].keys())
        if len(keys) != 1:
            raise rd.error("sweep", None, "give exactly one of r0 or r0_range")
        if "r0" in keys:
            sweep = tuple(rd.numbers("sweep", "r0"))
        else:
            lo, hi, step = rd.numbers("sweep", "r0_range", 3)
            axis = rd.build("sweep", "r0_range", lambda: Axis(lo, hi, step))
            sweep = tuple(float(v) for v in axis.values())
        if any(not v > 0 for v in sweep):
            raise rd.error("sweep", "r0" if "r0" in keys else "r0_range",
                           "ranges must be > 0")
    return BiasFile(config, sweep)
