"""Long multi-threaded run on the acyclic graph with periodic paused audits."""

import argparse

from concgraph.verify.stress import StressConfig, run_stress


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--threads", type=int, default=8)
    ap.add_argument("--secs", type=float, default=60.0)
    ap.add_argument("--every", type=float, default=2.0)
    ap.add_argument("--keys", type=int, default=200)
    ap.add_argument("--die", action="store_true")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = StressConfig(args.threads, args.secs, args.every, args.keys, die=args.die, seed=args.seed)

    def show(i, acyclic, problems, stats):
        print(f"probe {i}: acyclic={acyclic} problems={len(problems)} {stats}", flush=True)

    report = run_stress(cfg, on_probe=show)
    print(f"{report.ops} ops, {report.probes} probes, final acyclic={report.final_acyclic}")
    print("OK" if report.ok else "VIOLATION")
    raise SystemExit(0 if report.ok else 1)


if __name__ == "__main__":
    main()
