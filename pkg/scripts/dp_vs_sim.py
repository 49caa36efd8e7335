#!/usr/bin/env python3
"""Compare the exact two-receiver completion time V(0,0) with Monte Carlo
estimates of the least-received policy across coding window sizes."""

import argparse

from ncbroadcast.dp import solve_optimal
from ncbroadcast.model import validate_config
from ncbroadcast.sim import RngSpec, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--file-size", type=int, default=12)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--windows", default="2,4,6,12", help="comma list of K values")
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"F={args.file_size} p={args.p} trials={args.trials} seed={args.seed}")
    print(f"{'K':>5}  {'V(0,0)':>10}  {'sim mean':>10}  {'ci95':>8}  within CI")
    for K in (int(k) for k in args.windows.split(",")):
        cfg = validate_config(args.file_size, K, 2, args.p)
        v00 = solve_optimal(cfg)[0][0, 0]
        stats = run_experiment(cfg, "lr", args.trials, RngSpec(args.seed))
        within = abs(stats.mean - v00) <= stats.ci95_half_width
        print(
            f"{K:>5}  {v00:>10.4f}  {stats.mean:>10.4f}  "
            f"±{stats.ci95_half_width:>7.4f}  {'yes' if within else 'NO'}"
        )


if __name__ == "__main__":
    main()
