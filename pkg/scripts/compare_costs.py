"""Monte Carlo comparison of the two cost functions on the bundled scenarios.

Writes one CSV row per (scenario, cost) with mean absolute parameter errors
and the mean RMS trajectory error.

    python scripts/compare_costs.py --runs 20 --out results/costs.csv
"""

import argparse
import csv
import time
from pathlib import Path

from botma.cli import resolve_config
from botma.config import load_scenario
from botma.estimator import monte_carlo

SCENARIOS = ["scenario1_ct30.cfg", "scenario1_ct170.cfg", "scenario2_r15000.cfg",
             "scenario2_r25000.cfg"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default="results/costs.csv")
    ap.add_argument("scenarios", nargs="*", default=SCENARIOS)
    args = ap.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario", "cost", "runs", "failed", "abs_dr0_m", "abs_dcourse_deg",
                    "abs_dspeed_mps", "rms_m"])
        for name in args.scenarios:
            cfg = load_scenario(resolve_config(name))
            for kind in ("equidistant", "bearing-diff"):
                t0 = time.perf_counter()
                s = monte_carlo(cfg.scenario, cfg.space, kind, args.runs, args.seed,
                                anchor=cfg.anchor, workers=args.threads)
                dr, dc, ds = s.mean_param_error
                w.writerow([name, kind, s.runs, len(s.failures), f"{dr:.1f}", f"{dc:.3f}",
                            f"{ds:.3f}", f"{s.mean_rms_error:.1f}"])
                fh.flush()
                print(f"{name:>22} {kind:>13}: [{dr:.1f}, {dc:.3f}, {ds:.3f}] "
                      f"RMS {s.mean_rms_error:.1f} m ({time.perf_counter() - t0:.0f} s)")


if __name__ == "__main__":
    main()
