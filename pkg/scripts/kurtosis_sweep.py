"""Segment-length kurtosis against initial range, plus the course contrast.

    python scripts/kurtosis_sweep.py --out results/kurtosis.csv
"""

import argparse
import csv
from dataclasses import replace
from pathlib import Path

from botma.biaslab import bias_experiment, range_sweep
from botma.cli import resolve_config
from botma.config import load_bias


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default="bias_range_sweep.cfg")
    ap.add_argument("--runs", type=int, default=None)
    ap.add_argument("--transform", choices=["polar", "track"], default=None)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--out", default="results/kurtosis.csv")
    args = ap.parse_args()

    bf = load_bias(resolve_config(args.config))
    cfg = bf.config
    if args.runs:
        cfg = replace(cfg, runs=args.runs)
    if args.transform:
        cfg = replace(cfg, transform=args.transform)

    for course in (30.0, 170.0):
        rep = bias_experiment(replace(cfg, r0=5000.0, target_course=course), args.seed)
        print(f"R0=5000 target course {course:5.1f}: kurtosis {rep.kurtosis:.2f}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    points = range_sweep(cfg, bf.sweep or [cfg.r0], args.seed)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r0_m", "kurtosis", "mean_m", "std_m"])
        for p in points:
            if p.report is None:
                w.writerow([p.r0, "", "", ""])
                continue
            w.writerow([p.r0, f"{p.kurtosis:.4f}", f"{p.report.mean:.2f}",
                        f"{p.report.std:.2f}"])
    print(f"wrote {len(points)} points to {out}")


if __name__ == "__main__":
    main()
