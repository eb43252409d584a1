"""Command-line harness: instance files, solver dispatch, sweeps and property checks.

Instance files are UTF-8 JSON::

    {"m": 2, "n": 3, "accuracies": [...m+1], "times": [[...n], ...m+1 rows],
     "comm_times": [...n] (optional), "T": 1.0}

The last ``times`` row is the ES total time. Results are CSV rows with the
columns in ``CSV_FIELDS``; ``lp_objective`` is blank for solvers without a
relaxation, ``runtime_ms`` is blank in ``verify`` output so it stays
reproducible byte for byte.

Exit codes: 0 success, 1 infeasible instance, 2 I/O or schema error,
3 property-suite failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import suite
from .amdp import DEFAULT_DELTA, run_amdp, run_amdp_hetero
from .amr2 import run_amr2
from .baseline import greedy_rra
from .errors import DimensionMismatch, EdgeSchedError, InfeasibleInstance, NotIdenticalJobs
from .gen import PROFILES, GenParams, generate
from .model import Instance, SolveReport, validate
from .oracle import exact_ilp

log = logging.getLogger("edgesched")

CSV_FIELDS = (
    "algorithm", "n", "m", "T", "total_accuracy", "lp_objective", "makespan",
    "ed_load", "es_load", "violation_pct", "fractional_jobs", "runtime_ms", "seed",
)
ALGORITHMS = ("amr2", "amdp", "greedy", "exact")
DELTA_ENV = "EDGESCHED_DELTA"


class SchemaError(EdgeSchedError, ValueError):
    pass


# ---------------------------------------------------------------- instance files

def instance_to_dict(instance: Instance) -> dict:
    out = {
        "m": instance.m,
        "n": instance.n,
        "accuracies": instance.accuracies.tolist(),
        "times": instance.times.tolist(),
    }
    if instance.comm_times is not None:
        out["comm_times"] = instance.comm_times.tolist()
    out["T"] = instance.deadline
    return out


def instance_from_dict(data: dict) -> Instance:
    try:
        m, n = data["m"], data["n"]
        inst = Instance(data["accuracies"], data["times"], data["T"], data.get("comm_times"))
    except KeyError as exc:
        raise SchemaError(f"instance file is missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed instance: {exc}") from None
    if inst.times.shape != (m + 1, n) or len(inst.accuracies) != m + 1:
        raise DimensionMismatch(
            f"declared m={m}, n={n} but accuracies has {len(inst.accuracies)} entries "
            f"and times has shape {inst.times.shape}"
        )
    return validate(inst)


def dumps_instance(instance: Instance) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(instance_to_dict(instance)) + "\n"


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(dumps_instance(instance), encoding="utf-8")


def read_instance(path) -> Instance:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return instance_from_dict(data)


# ---------------------------------------------------------------- CSV records

@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    n: int
    m: int
    T: float
    total_accuracy: float
    lp_objective: float | None
    makespan: float
    ed_load: float
    es_load: float
    violation_pct: float
    fractional_jobs: int
    runtime_ms: float | None
    seed: int | None

    @classmethod
    def from_report(cls, instance: Instance, report: SolveReport, seed=None, timed=True):
        mt = report.metrics
        return cls(
            report.algorithm, instance.n, instance.m, instance.deadline, mt.total_accuracy,
            report.lp_objective, mt.makespan, mt.ed_load, mt.es_load, mt.violation_pct,
            report.fractional_job_count, report.runtime_ms if timed else None, seed,
        )

    def row(self) -> list:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)
        return [fmt(getattr(self, f)) for f in CSV_FIELDS]


def parse_records(text: str) -> list:
    """Read CSV produced by this module back into RunRecords."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise SchemaError(f"unexpected CSV header {reader.fieldnames}")
    ints = {"n", "m", "fractional_jobs", "seed"}
    out = []
    for row in reader:
        values = {}
        for f in CSV_FIELDS:
            v = row[f]
            if f == "algorithm":
                values[f] = v
            elif v == "":
                values[f] = None
            else:
                values[f] = int(v) if f in ints else float(v)
        out.append(RunRecord(**values))
    return out


class CsvSink:
    """Appends rows to a file (header written once) or to stdout."""

    def __init__(self, path=None):
        self.path = path

    def write(self, records) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.path is None or not Path(self.path).exists() or Path(self.path).stat().st_size == 0:
            writer.writerow(CSV_FIELDS)
        for r in records:
            writer.writerow(r.row())
        if self.path is None:
            sys.stdout.write(buf.getvalue())
        else:
            with open(self.path, "a", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())


# ---------------------------------------------------------------- dispatch

def default_delta() -> float:
    raw = os.environ.get(DELTA_ENV)
    return float(raw) if raw else DEFAULT_DELTA


def solve(instance: Instance, algorithm: str, delta: float | None = None) -> SolveReport:
    delta = default_delta() if delta is None else delta
    if algorithm == "amr2":
        return run_amr2(instance)
    if algorithm == "greedy":
        return greedy_rra(instance)
    if algorithm == "exact":
        return exact_ilp(instance)
    if algorithm == "amdp":
        try:
            return run_amdp(instance, delta)
        except NotIdenticalJobs:
            if instance.comm_times is None:
                raise
            return run_amdp_hetero(instance, delta)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------- subcommands

def cmd_gen(args) -> int:
    params = GenParams(args.profile, n=args.n, m=args.m, T=args.T, seed=args.seed, grid=args.grid)
    inst = generate(params)
    if args.out:
        write_instance(inst, args.out)
    else:
        sys.stdout.write(dumps_instance(inst))
    return 0


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    report = solve(inst, args.algo, args.delta)
    CsvSink(args.out).write([RunRecord.from_report(inst, report, seed=args.seed)])
    return 0


def _linspace(lo: float, hi: float, steps: int):
    if steps < 1:
        raise SchemaError("--steps must be at least 1")
    return [lo] if steps == 1 else np.linspace(lo, hi, steps).tolist()


def cmd_sweep(args) -> int:
    try:
        template = json.loads(Path(args.instance_template).read_text(encoding="utf-8"))
        base = GenParams(**template)
    except (json.JSONDecodeError, TypeError) as exc:
        raise SchemaError(f"bad instance template: {exc}") from None
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise SchemaError(f"unknown algorithm {a!r}")
    records, skipped = [], 0
    for value in _linspace(args.from_, args.to, args.steps):
        for s in range(args.seeds):
            if args.vary == "T":
                params = replace(base, T=float(value), seed=base.seed + s)
            else:
                params = replace(base, n=int(round(value)), seed=base.seed + s)
            inst = generate(params)
            for algo in algos:
                try:
                    report = solve(inst, algo, args.delta)
                except InfeasibleInstance as exc:
                    skipped += 1
                    log.warning("skip %s n=%d T=%g seed=%d: %s", algo, inst.n, inst.deadline, params.seed, exc)
                    continue
                records.append(RunRecord.from_report(inst, report, seed=params.seed))
    CsvSink(args.out).write(records)
    if skipped:
        print(f"{skipped} infeasible solves skipped", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    n = args.seeds
    runs = []
    results = suite.amr2_checks(n, seed=args.seed, records=runs)
    results.append(suite.sub_ilp_check(n, seed=args.seed + 2))
    results.append(suite.amdp_check(n, seed=args.seed + 3))

    labels = {
        "lemma1": "≤2 fractional",
        "makespan_2T": "makespan ≤ 2T",
        "gap_lp": "A*_LP - A† ≤ 2(a_max - a_min)",
        "gap_opt": "A* - A† ≤ 2(a_max - a_min)",
        "relaxation_bound": "A*_LP ≥ A*",
        "sub_ilp": "sub-ILP matches brute force",
        "amdp_vs_oracle": "AMDP matches exact",
    }
    for r in results:
        print(f"{r.name}: {r.passed}/{r.total} {labels[r.name]}")
        for detail in r.failures[:5]:
            print(f"  failed case {detail}")
    if args.out:
        CsvSink(args.out).write(
            RunRecord.from_report(inst, rep, seed=k, timed=False) for k, inst, rep in runs
        )
    return 0 if all(r.ok for r in results) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgesched", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated instance file")
    g.add_argument("--profile", choices=PROFILES, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--T", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--grid", type=float, default=None, help="identical_random: snap times to this grid")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve one instance file and append a CSV row")
    s.add_argument("--instance", required=True)
    s.add_argument("--algo", choices=ALGORITHMS, default="amr2")
    s.add_argument("--delta", type=float, default=None, help=f"AMDP grid in seconds (env {DELTA_ENV})")
    s.add_argument("--seed", type=int, default=None, help="recorded in the seed column")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="solve generated instances over a range of T or n")
    w.add_argument("--instance-template", required=True, help="JSON object of generator parameters")
    w.add_argument("--vary", choices=("T", "n"), required=True)
    w.add_argument("--from", dest="from_", type=float, required=True)
    w.add_argument("--to", type=float, required=True)
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--algos", default="amr2,greedy")
    w.add_argument("--seeds", type=int, default=1, help="replicates per point, seeds template.seed onward")
    w.add_argument("--delta", type=float, default=None)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--seeds", type=int, default=100)
    v.add_argument("--seed", type=int, default=0, help="corpus base seed")
    v.add_argument("--out", help="CSV of the AMR2 corpus runs")
    v.set_defaults(func=cmd_verify)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InfeasibleInstance as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except (EdgeSchedError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
