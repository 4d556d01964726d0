"""Kurtosis at a few ranges as a function of the sampling interval.

Shows how strongly the segment-length statistics depend on ``ts`` for each
transform; used to choose the bundled bias configuration.

    python scripts/sampling_interval.py --runs 100000
"""

import argparse
from dataclasses import replace

from botma.biaslab import BiasConfig, bias_experiment
from botma.rng import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--ts", type=float, nargs="+", default=[10, 20, 35, 60, 120, 160])
    ap.add_argument("--ranges", type=float, nargs="+", default=[5000, 25000, 50000, 100000])
    args = ap.parse_args()

    base = BiasConfig(runs=args.runs)
    print("transform     ts  " + "  ".join(f"{r:>8.0f}" for r in args.ranges))
    for transform in ("polar", "track"):
        for ts in args.ts:
            ks = []
            for i, r0 in enumerate(args.ranges):
                cfg = replace(base, r0=r0, ts=ts, transform=transform)
                ks.append(bias_experiment(cfg, derive_seed(args.seed, i)).kurtosis)
            print(f"{transform:>9} {ts:6.0f}  " + "  ".join(f"{k:8.2f}" for k in ks))


if __name__ == "__main__":
    main()
