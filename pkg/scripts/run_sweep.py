"""Throughput sweep over workloads x variants x thread counts, written as CSV.

    python3 scripts/run_sweep.py --secs 2 --threads 1 2 4 8 16 --out results/
"""

import argparse
from dataclasses import replace
from pathlib import Path

from concgraph.bench import VARIANTS, builtin_workloads, emit_csv, run_benchmark


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--workloads", nargs="+", default=list(builtin_workloads()))
    ap.add_argument("--variants", nargs="+", default=list(VARIANTS))
    ap.add_argument("--threads", nargs="+", type=int, default=[1, 2, 4, 8, 16])
    ap.add_argument("--acyclic", action="store_true")
    ap.add_argument("--secs", type=float, default=2.0)
    ap.add_argument("--iters", type=int, default=1)
    ap.add_argument("--keys", type=int, default=1000)
    ap.add_argument("--density", type=float, default=1.0)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.workloads:
        base = replace(
            builtin_workloads()[name],
            acyclic=args.acyclic,
            duration=args.secs,
            iterations=args.iters,
            key_range=args.keys,
            initial_size=args.keys,
            density=args.density,
        )
        rows = []
        for variant in args.variants:
            for t in args.threads:
                r = run_benchmark(replace(base, variant=variant, threads=t))
                rows.append(r)
                print(",".join(map(str, r.csv_row())), flush=True)
        tag = "acyclic-" if args.acyclic else ""
        emit_csv(rows, out / f"{tag}{name}.csv")


if __name__ == "__main__":
    main()
