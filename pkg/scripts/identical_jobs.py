"""AMDP on identical jobs: accuracy against AMR2 and greedy, and runtime as n grows."""

import argparse

from edgesched.gen import GenParams, generate

from _common import run_grid, summarize, write


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[50, 100, 200, 300])
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--T", type=float, default=4.0)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    points = (
        (n, s, generate(GenParams("identical_random", n=n, m=args.m, T=args.T, seed=s)))
        for n in args.n
        for s in range(args.seeds)
    )
    records, skipped = run_grid(points, ["amdp", "amr2", "greedy"], delta=args.delta)
    summarize(records, "n")
    if skipped:
        print(f"{skipped} infeasible solves skipped")
    if args.out:
        write(records, args.out)


if __name__ == "__main__":
    main()
