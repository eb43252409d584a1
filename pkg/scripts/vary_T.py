"""Accuracy and deadline violation of AMR2 vs the greedy baseline as T grows (table2 profile)."""

import argparse

from edgesched.gen import GenParams, generate

from _common import run_grid, summarize, write


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--T", type=float, nargs="+", default=[0.5, 1.0, 2.0, 3.0, 4.0])
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--algos", default="amr2,greedy")
    ap.add_argument("--out", default=None, help="CSV path (stdout summary only if omitted)")
    args = ap.parse_args()

    points = (
        (T, s, generate(GenParams("table2", n=args.n, T=T, seed=s)))
        for T in args.T
        for s in range(args.seeds)
    )
    records, skipped = run_grid(points, args.algos.split(","))
    summarize(records, "T")
    if skipped:
        print(f"{skipped} infeasible solves skipped")
    if args.out:
        write(records, args.out)


if __name__ == "__main__":
    main()
