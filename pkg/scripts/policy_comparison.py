#!/usr/bin/env python3
"""Completion-time comparison of the lr, rrnc and rs batch-selection
policies across coding window sizes.

Desk-scale defaults finish in a couple of minutes; full-scale scenarios
are a matter of flags, e.g.

    python scripts/policy_comparison.py --receivers 5 --file-size 5000 \
        --p 0.6 --windows 50,100,250,500,1000,2500,5000
    python scripts/policy_comparison.py --receivers 20 --file-size 2500 \
        --p 0.8 --windows 25,50,125,250,500,1250,2500
"""

import argparse

from ncbroadcast.sim import RngSpec, sweep_coding_window, write_stats_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--receivers", "-N", type=int, default=5)
    ap.add_argument("--file-size", type=int, default=500)
    ap.add_argument("--p", type=float, default=0.6)
    ap.add_argument("--windows", default="5,10,25,50,100,250,500", help="comma list of K values")
    ap.add_argument("--policies", default="lr,rrnc,rs")
    ap.add_argument("--trials", type=int, default=1_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=("ideal", "codec"), default="ideal")
    ap.add_argument("--out", help="also write the stats CSV here")
    args = ap.parse_args()

    windows = [int(k) for k in args.windows.split(",")]
    policies = args.policies.split(",")
    cells = sweep_coding_window(
        args.file_size, args.receivers, args.p, policies, windows,
        args.trials, RngSpec(args.seed), mode=args.mode,
    )
    print(f"N={args.receivers} F={args.file_size} p={args.p} trials={args.trials} mode={args.mode}")
    print(f"{'policy':<7} {'K':>6}  {'mean':>10}  {'stddev':>9}  {'ci95':>8}")
    for cell in cells:
        s = cell.stats
        print(
            f"{cell.policy:<7} {cell.config.K:>6}  {s.mean:>10.2f}  "
            f"{s.stddev:>9.2f}  ±{s.ci95_half_width:>7.2f}"
        )
    if args.out:
        write_stats_csv(args.out, cells)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
