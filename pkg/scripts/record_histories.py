"""Record random small concurrent histories and check each one.

Non-linearizable or inconclusive histories are written to --failures for
replay with ``concgraph verify --history FILE``.
"""

import argparse
import time
from pathlib import Path

from concgraph.verify import HistoryConfig, check_linearizable, random_histories


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=1000)
    ap.add_argument("--acyclic", action="store_true")
    ap.add_argument("--die", action="store_true")
    ap.add_argument("--keys", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--failures", default="failed_histories")
    args = ap.parse_args()

    cfg = HistoryConfig(key_range=args.keys, acyclic=args.acyclic, die=args.die)
    bad = relaxed = 0
    t0 = time.perf_counter()
    for i, (_, h, _) in enumerate(random_histories(args.n, cfg, args.seed)):
        v = check_linearizable(h)
        relaxed += v.relaxed_needed
        if v.linearizable is not True:
            bad += 1
            d = Path(args.failures)
            d.mkdir(exist_ok=True)
            h.write(d / f"h{i:06d}.txt")
            print(f"history {i}: {v}")
    dt = time.perf_counter() - t0
    print(f"{args.n} histories, {bad} failing, {relaxed} needed false-positive aborts, {dt:.1f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
