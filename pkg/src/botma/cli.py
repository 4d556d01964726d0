"""Command-line entry point: ``botma estimate | bias | bearings``.

Exit codes: 0 success, 1 runtime failure, 2 bad configuration or arguments.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
import time
from dataclasses import asdict, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .biaslab import bias_experiment, range_sweep
from .config import load_bias, load_scenario
from .errors import ConfigError, TMAError
from .estimator import Anchor, Axis, CostKind, SearchSpace, monte_carlo
from .scenario import generate_bearings, target_track

log = logging.getLogger("botma")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


def resolve_config(name: str) -> Path:
    """A path on disk, or the name of a config bundled with the package."""
    p = Path(name)
    if p.exists():
        return p
    bundled = resources.files("botma") / "configs" / name
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigError("file not found (neither a path nor a bundled config)", path=name)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def write_csv(path: Path, header, rows, *, config_hash: str, seed) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# botma {__version__} config_sha256={config_hash} seed={seed}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _hash(path: Path, extra: str = "") -> str:
    h = hashlib.sha256(path.read_bytes())
    h.update(extra.encode())
    return h.hexdigest()[:16]


def _axis(text: str) -> Axis:
    try:
        lo, hi, step = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi,step, got {text!r}") from None
    return Axis(lo, hi, step)


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# -- estimate ---------------------------------------------------------------

def cmd_estimate(args) -> dict:
    path = resolve_config(args.scenario)
    cfg = load_scenario(path)
    space = SearchSpace(args.r0 or cfg.space.r0, args.course or cfg.space.course,
                        args.speed or cfg.space.speed)
    anchor = args.anchor or cfg.anchor
    kinds = [CostKind.BEARING_DIFF, CostKind.EQUIDISTANT] if args.cost == "both" \
        else [CostKind(args.cost)]
    extra = json.dumps({"space": asdict(space), "anchor": str(anchor.value),
                        "runs": args.runs})
    chash = _hash(path, extra)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    summaries = {}
    for kind in kinds:
        log.info("estimate %s: %d runs on %s", kind.value, args.runs, path.name)
        summaries[kind] = monte_carlo(cfg.scenario, space, kind, args.runs, args.seed,
                                      anchor=anchor, workers=args.threads)
    wall = time.perf_counter() - t0

    summary_rows, run_rows = [], []
    for kind, s in summaries.items():
        summary_rows.append([kind.value, s.runs, len(s.failures), *s.mean_param_error,
                             s.mean_rms_error])
        for i, r in enumerate(s.per_run):
            if r is None:
                run_rows.append([kind.value, i, "", "", "", "", "", "", "", "", "",
                                 s.failures[i]])
            else:
                run_rows.append([kind.value, i, *r.best.as_tuple(), r.cost, *r.param_error,
                                 r.rms_error, r.cells_evaluated, ""])
    summary_csv, runs_csv = out / "summary.csv", out / "runs.csv"
    write_csv(summary_csv, ["cost_kind", "runs", "failed", "mean_abs_dr0_m",
                            "mean_abs_dcourse_deg", "mean_abs_dspeed_mps", "mean_rms_m"],
              summary_rows, config_hash=chash, seed=args.seed)
    write_csv(runs_csv, ["cost_kind", "run", "r0_m", "course_deg", "speed_mps", "cost",
                         "dr0_m", "dcourse_deg", "dspeed_mps", "rms_m", "cells", "error"],
              run_rows, config_hash=chash, seed=args.seed)
    report = {
        "command": "estimate", "version": __version__, "config": str(path),
        "config_sha256": chash, "seed": args.seed, "runs": args.runs,
        "scenario": _jsonable(asdict(cfg.scenario)), "search_space": asdict(space),
        "anchor": anchor.value, "wall_clock_s": round(wall, 3),
        "summary": {k.value: {"runs": s.runs, "failed": len(s.failures),
                              "mean_abs_param_error": list(s.mean_param_error),
                              "mean_rms_error_m": s.mean_rms_error}
                    for k, s in summaries.items()},
        "artifacts": [str(summary_csv), str(runs_csv)],
    }
    _write_report(out, report)
    for row in summary_rows:
        print(f"{row[0]:>13}: |dR0|={row[3]:.1f} m  |dC|={row[4]:.2f} deg  "
              f"|dS|={row[5]:.3f} m/s  RMS={row[6]:.1f} m  ({row[2]} failed)")
    return report


# -- bias -------------------------------------------------------------------

def _bias_text(config, rep) -> str:
    lines = [f"r0_m: {_fmt(config.r0)}", f"runs_kept: {rep.runs_kept}",
             f"runs_rejected: {rep.runs_rejected}",
             f"geometry_warning: {str(rep.geometry_warning).lower()}",
             f"mean_m: {_fmt(rep.mean)}", f"std_m: {_fmt(rep.std)}",
             f"kurtosis: {_fmt(rep.kurtosis)}"]
    return "\n".join(lines) + "\n"


def cmd_bias(args) -> dict:
    path = resolve_config(args.bias)
    bf = load_bias(path)
    config = bf.config
    if args.runs is not None:
        try:
            config = replace(config, runs=args.runs)
        except ConfigError as exc:
            raise ConfigError(str(exc), field="--runs") from None
    if args.sweep and bf.sweep is None:
        raise ConfigError("--sweep needs a [sweep] section", field="sweep", path=path)
    chash = _hash(path, json.dumps({"runs": config.runs, "sweep": bool(args.sweep)}))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    artifacts = []
    header = (f"# botma {__version__} config_sha256={chash} seed={args.seed}\n"
              f"transform: {config.transform}\nts_s: {_fmt(config.ts)}\n"
              f"target_course_deg: {_fmt(config.target_course)}\n"
              f"ownship_course_deg: {_fmt(config.ownship_course)}\n")
    if args.sweep:
        points = range_sweep(config, bf.sweep, args.seed)
        rows = []
        for p in points:
            if p.report is None:
                rows.append([p.r0, "", "", "", "", "", p.error])
            else:
                r = p.report
                rows.append([p.r0, r.kurtosis, r.mean, r.std, r.runs_kept, r.runs_rejected, ""])
        sweep_csv = out / "sweep.csv"
        write_csv(sweep_csv, ["r0_m", "kurtosis", "mean_m", "std_m", "runs_kept",
                              "runs_rejected", "error"], rows, config_hash=chash,
                  seed=args.seed)
        artifacts.append(str(sweep_csv))
        text = header + "".join("\n" + (_bias_text(replace(config, r0=p.r0), p.report)
                                        if p.report else f"r0_m: {_fmt(p.r0)}\nerror: {p.error}\n")
                                for p in points)
        for p in points:
            print(f"R0={p.r0:>9.0f} m  kurtosis={p.kurtosis:.3f}" if p.report
                  else f"R0={p.r0:>9.0f} m  failed: {p.error}")
        result = {"points": [{"r0": p.r0, "kurtosis": p.kurtosis if p.report else None,
                              "error": p.error} for p in points]}
    else:
        rep = bias_experiment(config, args.seed)
        hist_csv = out / "histogram.csv"
        rows = zip(rep.bin_edges[:-1], rep.bin_edges[1:], rep.counts)
        write_csv(hist_csv, ["bin_lo", "bin_hi", "count"], rows, config_hash=chash,
                  seed=args.seed)
        artifacts.append(str(hist_csv))
        text = header + "\n" + _bias_text(config, rep)
        print(f"kurtosis={rep.kurtosis:.3f}  mean={rep.mean:.1f} m  std={rep.std:.1f} m  "
              f"kept={rep.runs_kept} rejected={rep.runs_rejected}")
        result = {"kurtosis": rep.kurtosis, "mean_m": rep.mean, "std_m": rep.std,
                  "runs_kept": rep.runs_kept, "runs_rejected": rep.runs_rejected,
                  "geometry_warning": rep.geometry_warning}
    report_txt = out / "bias_report.txt"
    report_txt.write_text(text, encoding="utf-8")
    artifacts.append(str(report_txt))
    report = {"command": "bias", "version": __version__, "config": str(path),
              "config_sha256": chash, "seed": args.seed, "config_echo": asdict(config),
              "sweep": list(bf.sweep) if args.sweep else None,
              "wall_clock_s": round(time.perf_counter() - t0, 3), "result": result,
              "artifacts": artifacts}
    _write_report(out, report)
    return report


# -- bearings ---------------------------------------------------------------

def cmd_bearings(args) -> dict:
    path = resolve_config(args.scenario)
    sc = load_scenario(path).scenario
    series = generate_bearings(sc, args.seed)
    tx, ty = target_track(sc, series.times)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = zip(series.times, series.true_bearings, series.measured_bearings,
               series.ownship_x, series.ownship_y, tx, ty)
    write_csv(out, ["t_s", "true_bearing_deg", "measured_bearing_deg", "ownship_x_m",
                    "ownship_y_m", "target_x_m", "target_y_m"], rows,
              config_hash=_hash(path), seed=args.seed)
    print(f"wrote {len(series)} bearings to {out}")
    return {"command": "bearings", "artifacts": [str(out)]}


# -- plumbing ---------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _write_report(out: Path, report: dict) -> None:
    # wall-clock lives here only, so the CSVs stay byte-identical across reruns
    (out / "run_report.json").write_text(json.dumps(_jsonable(report), indent=2) + "\n",
                                         encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="botma", description=(
        "Bearings-only target motion analysis laboratory: cost-function "
        "comparison by brute-force search and segment-length kurtosis."))
    p.add_argument("--version", action="version", version=f"botma {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--out", default=out_default)
        sp.add_argument("--threads", type=_positive, default=1,
                        help="worker threads (results do not depend on this)")

    e = sub.add_parser("estimate", help="Monte Carlo grid-search estimation")
    e.add_argument("scenario", help="scenario .cfg path or bundled name")
    e.add_argument("--cost", choices=["both", "bearing-diff", "equidistant"], default="both")
    e.add_argument("--runs", type=_positive, default=20)
    e.add_argument("--r0", type=_axis, help="override range grid lo,hi,step (m)")
    e.add_argument("--course", type=_axis, help="override course grid lo,hi,step (deg)")
    e.add_argument("--speed", type=_axis, help="override speed grid lo,hi,step (m/s)")
    e.add_argument("--anchor", choices=["true_b0", "measured_b0"], default=None)
    common(e, "results/estimate")
    e.set_defaults(func=cmd_estimate)

    b = sub.add_parser("bias", help="segment-length distribution and kurtosis")
    b.add_argument("bias", help="bias .cfg path or bundled name")
    b.add_argument("--sweep", action="store_true", help="run the [sweep] ranges")
    b.add_argument("--runs", type=int, default=None, help="override draws per point")
    common(b, "results/bias")
    b.set_defaults(func=cmd_bias)

    g = sub.add_parser("bearings", help="export one noisy bearing series as CSV")
    g.add_argument("scenario")
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out", default="results/bearings.csv")
    g.set_defaults(func=cmd_bearings)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "anchor", None):
        args.anchor = Anchor(args.anchor)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TMAError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
