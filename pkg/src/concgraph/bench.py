"""Throughput harness: random operation mixes against each graph variant."""

from __future__ import annotations

import bisect
import csv
import random
import threading
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .acyclic import AcyclicGraph
from .baselines import CoarseLockGraph, SequentialGraph
from .core import ConcurrentGraph

OPS = ("add_vertex", "add_edge", "remove_vertex", "remove_edge", "contains_vertex", "contains_edge")
VARIANTS = ("nodie", "die", "coarse", "seq")
CSV_HEADER = ("workload", "variant", "threads", "ops_per_sec", "failed_addedge", "false_positives")

# Vertex keys are drawn again this many times when they hit a deleted key.
_REDRAWS = 16
_STRIPES = 64


@dataclass
class WorkloadSpec:
    """One benchmark configuration. ``mix`` is percentages over :data:`OPS`."""

    name: str = "update"
    mix: tuple[float, ...] = (25, 25, 10, 10, 15, 15)
    key_range: int = 1000
    threads: int = 1
    duration: float = 2.0
    seed: int = 0
    variant: str = "nodie"
    acyclic: bool = False
    initial_size: int = 1000
    density: float = 1.0  # fraction of the i<j pairs present initially
    iterations: int = 1
    max_ops: int | None = None  # per thread and iteration; None runs for ``duration``

    def validate(self) -> None:
        if len(self.mix) != len(OPS):
            raise ValueError(f"mix needs {len(OPS)} entries, got {len(self.mix)}")
        if any(p < 0 for p in self.mix):
            raise ValueError("mix percentages must be nonnegative")
        if abs(sum(self.mix) - 100) > 1e-9:
            raise ValueError(f"mix percentages sum to {sum(self.mix)}, not 100")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.threads < 1 or self.iterations < 1:
            raise ValueError("threads and iterations must be positive")
        if self.key_range < 1 or not 0 <= self.initial_size <= self.key_range:
            raise ValueError("need 0 <= initial_size <= key_range")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if self.max_ops is None and self.duration <= 0:
            raise ValueError("duration must be positive")

    @property
    def label(self) -> str:
        return f"acyclic-{self.variant}" if self.acyclic else self.variant

    @property
    def effective_threads(self) -> int:
        # The sequential baseline is not thread-safe; it always runs alone.
        return 1 if self.variant == "seq" else self.threads


@dataclass
class BenchResult:
    workload: str
    variant: str
    threads: int
    total_ops: int
    elapsed: float
    ops_per_sec: float
    op_counts: dict[str, int] = field(default_factory=dict)
    failed_addedge: int = 0
    false_positives: int = 0
    cycle_rejections: int = 0
    retries: int = 0
    iterations: int = 1
    acyclic_ok: bool | None = None

    def csv_row(self) -> tuple:
        return (
            self.workload,
            self.variant,
            self.threads,
            f"{self.ops_per_sec:.1f}",
            self.failed_addedge,
            self.false_positives,
        )


def builtin_workloads() -> dict[str, WorkloadSpec]:
    return {
        "update": WorkloadSpec("update", (25, 25, 10, 10, 15, 15)),
        "contains": WorkloadSpec("contains", (7, 7, 3, 3, 40, 40)),
        "edges": WorkloadSpec("edges", (0, 40, 0, 60, 0, 0)),
    }


def initial_edges(n: int, density: float = 1.0, seed: int = 0) -> list[tuple[int, int]]:
    """Key-ascending edges over vertices 1..n, so the result is always a DAG."""
    if density >= 1.0:
        return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    rng = random.Random(seed)
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < density]


def make_graph(variant: str, acyclic: bool = False, vertices=(), edges=()):
    if variant in ("nodie", "die"):
        cls = AcyclicGraph if acyclic else ConcurrentGraph
        return cls.from_snapshot(vertices, edges, die=variant == "die")
    if variant == "coarse":
        return CoarseLockGraph.from_snapshot(vertices, edges, acyclic=acyclic)
    if variant == "seq":
        return SequentialGraph.from_snapshot(vertices, edges, acyclic=acyclic)
    raise ValueError(f"unknown variant {variant!r}")


def seed_initial_graph(spec: WorkloadSpec):
    n = spec.initial_size
    return make_graph(
        spec.variant, spec.acyclic, range(1, n + 1), initial_edges(n, spec.density, spec.seed)
    )


def thread_rng(spec: WorkloadSpec, tid: int, iteration: int = 0) -> random.Random:
    return random.Random(f"{spec.seed}:{iteration}:{tid}")


def op_stream(spec: WorkloadSpec, tid: int, iteration: int = 0):
    """Endless ``(op, key1, key2)`` draws for one worker; a pure function of the seed."""
    rng = thread_rng(spec, tid, iteration)
    total = sum(spec.mix)
    cum = []
    acc = 0.0
    for p in spec.mix:
        acc += p
        cum.append(acc / total)
    cum[-1] = 1.0
    r, randint, k = rng.random, rng.randint, spec.key_range
    while True:
        i = bisect.bisect_right(cum, r())
        while spec.mix[i] == 0:  # float edge cases land on empty slots
            i = bisect.bisect_right(cum, r())
        yield OPS[i], randint(1, k), randint(1, k)


class _Deleted:
    """Keys removed during a run. Adds and removes of one key are serialized
    through a striped lock so a key is never inserted after its removal."""

    def __init__(self):
        self.keys: set[int] = set()
        self.locks = [threading.Lock() for _ in range(_STRIPES)]


def _worker(graph, spec, tid, iteration, deleted, running, out):
    counts = dict.fromkeys(OPS, 0)
    failed_add = 0
    stream = op_stream(spec, tid, iteration)
    redraw = thread_rng(spec, -1 - tid, iteration).randint
    limit = spec.max_ops
    add_vertex, remove_vertex = graph.add_vertex, graph.remove_vertex
    add_edge, remove_edge = graph.add_edge, graph.remove_edge
    contains_vertex, contains_edge = graph.contains_vertex, graph.contains_edge
    gone, locks = deleted.keys, deleted.locks
    n = 0
    for op, k1, k2 in stream:
        if limit is not None:
            if n >= limit:
                break
        elif not running[0]:
            break
        n += 1
        counts[op] += 1
        if op == "add_edge":
            if not add_edge(k1, k2):
                failed_add += 1
        elif op == "remove_edge":
            remove_edge(k1, k2)
        elif op == "contains_vertex":
            contains_vertex(k1)
        elif op == "contains_edge":
            contains_edge(k1, k2)
        elif op == "add_vertex":
            for _ in range(_REDRAWS):
                if k1 not in gone:
                    break
                k1 = redraw(1, spec.key_range)
            lock = locks[k1 % _STRIPES]
            with lock:
                if k1 not in gone:
                    add_vertex(k1)
        else:
            with locks[k1 % _STRIPES]:
                gone.add(k1)
                remove_vertex(k1)
    out[tid] = (counts, failed_add)


def run_iteration(spec: WorkloadSpec, iteration: int):
    graph = seed_initial_graph(spec)
    nthreads = spec.effective_threads
    deleted = _Deleted()
    running = [True]
    out: dict[int, tuple] = {}
    workers = [
        threading.Thread(target=_worker, args=(graph, spec, t, iteration, deleted, running, out))
        for t in range(nthreads)
    ]
    start = time.perf_counter()
    for w in workers:
        w.start()
    if spec.max_ops is None:
        time.sleep(spec.duration)
        running[0] = False
    for w in workers:
        w.join()
    elapsed = time.perf_counter() - start
    counts = dict.fromkeys(OPS, 0)
    failed = 0
    for c, f in out.values():
        for op, n in c.items():
            counts[op] += n
        failed += f
    return graph, counts, failed, elapsed


def run_benchmark(spec: WorkloadSpec) -> BenchResult:
    """Run ``spec.iterations`` fresh iterations; ops/sec is their mean."""
    from .verify.audit import audit_acyclicity

    spec.validate()
    counts = dict.fromkeys(OPS, 0)
    rates = []
    failed = fps = rejections = retries = 0
    elapsed_total = 0.0
    acyclic_ok = True if spec.acyclic else None
    for it in range(spec.iterations):
        graph, c, f, elapsed = run_iteration(spec, it)
        for op, n in c.items():
            counts[op] += n
        rates.append(sum(c.values()) / elapsed if elapsed > 0 else 0.0)
        elapsed_total += elapsed
        failed += f
        stats = graph.stats
        fps += stats.false_positives
        rejections += stats.cycle_rejections
        retries += stats.retries
        if spec.acyclic and not audit_acyclicity(graph.snapshot()):
            acyclic_ok = False
    return BenchResult(
        workload=spec.name,
        variant=spec.label,
        threads=spec.effective_threads,
        total_ops=sum(counts.values()),
        elapsed=elapsed_total,
        ops_per_sec=sum(rates) / len(rates),
        op_counts=counts,
        failed_addedge=failed,
        false_positives=fps,
        cycle_rejections=rejections,
        retries=retries,
        iterations=spec.iterations,
        acyclic_ok=acyclic_ok,
    )


def sweep(base: WorkloadSpec, variants=VARIANTS, thread_counts=(1, 2, 4, 8, 16)) -> list[BenchResult]:
    results = []
    for variant in variants:
        for t in thread_counts:
            results.append(run_benchmark(replace(base, variant=variant, threads=t)))
    return results


def emit_csv(results, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in results:
            w.writerow(r.csv_row())
    return path


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        row["threads"] = int(row["threads"])
        row["ops_per_sec"] = float(row["ops_per_sec"])
        row["failed_addedge"] = int(row["failed_addedge"])
        row["false_positives"] = int(row["false_positives"])
    return rows


def spec_dict(spec: WorkloadSpec) -> dict:
    return asdict(spec)
