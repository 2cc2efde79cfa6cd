"""Command line: ``bench``, ``verify`` and ``audit``.

Any ``bench``/``audit`` flag may also come from a ``--config`` file of
``key = value`` lines (``#`` starts a comment); flags given on the command
line win.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import bench

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def read_config(path) -> dict[str, str]:
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = value
    return cfg


def _flag(value: str) -> bool:
    v = str(value).strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _add_workload_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file supplying defaults for any flag")
    p.add_argument("--workload", choices=sorted(bench.builtin_workloads()), default="update")
    p.add_argument("--variant", choices=bench.VARIANTS, default="nodie")
    p.add_argument("--acyclic", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--keys", type=int, default=1000, help="key range 1..K")
    p.add_argument("--initial", type=int, default=None, help="initial vertices (default: K)")
    p.add_argument("--density", type=float, default=1.0, help="initial i<j edge density")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="concgraph")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="measure throughput of one workload/variant")
    _add_workload_args(b)
    b.add_argument("--secs", type=float, default=2.0)
    b.add_argument("--iters", type=int, default=1)
    b.add_argument("--out", help="write CSV here (default: stdout)")

    v = sub.add_parser("verify", help="check a recorded history for linearizability")
    v.add_argument("--history", required=True)
    v.add_argument("--model", choices=["plain", "acyclic"], default=None)
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="no false-positive aborts allowed")
    mode.add_argument("--relaxed", action="store_true", help="admit false-positive aborts")
    v.add_argument("--budget", type=int, default=500_000)

    a = sub.add_parser("audit", help="random concurrent run, then structural audits")
    _add_workload_args(a)
    a.add_argument("--ops", type=int, default=10_000, help="total operations")
    a.set_defaults(keys=64, density=0.5)
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = parser.parse_args(argv)
    if getattr(ns, "config", None):
        cfg = read_config(ns.config)
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in cfg.items():
            if key not in known or key in ("config", "help"):
                raise SystemExit(f"unknown config key {key!r}")
            action = known[key]
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = _flag(value)
            else:
                defaults[key] = value
        sub.set_defaults(**defaults)
        ns = parser.parse_args(argv)
    return ns


def _spec(ns, **extra) -> bench.WorkloadSpec:
    base = bench.builtin_workloads()[ns.workload]
    return replace(
        base,
        variant=ns.variant,
        acyclic=ns.acyclic,
        threads=ns.threads,
        key_range=ns.keys,
        initial_size=ns.keys if ns.initial is None else ns.initial,
        density=ns.density,
        seed=ns.seed,
        **extra,
    )


def cmd_bench(ns) -> int:
    spec = _spec(ns, duration=ns.secs, iterations=ns.iters)
    result = bench.run_benchmark(spec)
    if ns.out:
        bench.emit_csv([result], ns.out)
    else:
        print(",".join(bench.CSV_HEADER))
        print(",".join(map(str, result.csv_row())))
    print(
        f"# {result.total_ops} ops in {result.elapsed:.2f}s, retries={result.retries}, "
        f"cycle_rejections={result.cycle_rejections}, acyclic_ok={result.acyclic_ok}",
        file=sys.stderr,
    )
    return 0 if result.acyclic_ok is not False else 1


def cmd_verify(ns) -> int:
    from .verify import History, check_linearizable

    h = History.read(ns.history)
    if not h.is_well_formed():
        print("malformed history")
        return 2
    relaxed = True if ns.relaxed else False if ns.strict else None
    verdict = check_linearizable(h, model=ns.model, relaxed=relaxed, budget=ns.budget)
    print(verdict)
    if verdict.relaxed_needed:
        print("(needed false-positive aborts)")
    if verdict.inconclusive:
        return 3
    return 0 if verdict.linearizable else 1


def cmd_audit(ns) -> int:
    from .verify import audit_acyclicity, audit_structure

    per_thread = max(1, ns.ops // max(1, ns.threads))
    spec = _spec(ns, max_ops=per_thread)
    spec.validate()
    graph, counts, failed, elapsed = bench.run_iteration(spec, 0)
    problems = audit_structure(graph) if ns.variant in ("nodie", "die") else []
    acyclic_ok = audit_acyclicity(graph) if ns.acyclic else None
    print(f"{sum(counts.values())} ops on {spec.effective_threads} threads in {elapsed:.2f}s")
    for p in problems:
        print(f"structure: {p}")
    if acyclic_ok is not None:
        print(f"acyclic: {'ok' if acyclic_ok else 'CYCLE FOUND'}")
    print("audit passed" if not problems and acyclic_ok is not False else "audit FAILED")
    return 0 if not problems and acyclic_ok is not False else 1


def main(argv=None) -> int:
    ns = parse_args(argv)
    return {"bench": cmd_bench, "verify": cmd_verify, "audit": cmd_audit}[ns.command](ns)


if __name__ == "__main__":
    raise SystemExit(main())
