"""Accuracy, violation and runtime as the number of jobs grows at a fixed deadline."""

import argparse

from edgesched.gen import GenParams, generate

from _common import run_grid, summarize, write


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[10, 20, 30, 40, 50, 60])
    ap.add_argument("--T", type=float, default=4.0)
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--algos", default="amr2,greedy")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    points = (
        (n, s, generate(GenParams("table2", n=n, T=args.T, seed=s)))
        for n in args.n
        for s in range(args.seeds)
    )
    records, skipped = run_grid(points, args.algos.split(","))
    summarize(records, "n")
    if skipped:
        print(f"{skipped} infeasible solves skipped")
    if args.out:
        write(records, args.out)


if __name__ == "__main__":
    main()
