"""Multi-threaded acyclic stress run with paused mid-run audits."""

from __future__ import annotations

import itertools
import random
import threading
import time
from dataclasses import dataclass, field

from ..acyclic import AcyclicGraph
from ..bench import initial_edges
from .audit import audit_acyclicity, audit_structure


@dataclass
class StressConfig:
    threads: int = 8
    duration: float = 60.0
    probe_every: float = 2.0
    keys: int = 200
    initial_density: float = 0.05
    # add_vertex, remove_vertex, add_edge, remove_edge
    mix: tuple[float, float, float, float] = (5, 5, 36, 54)
    die: bool = False
    seed: int = 0


@dataclass
class StressReport:
    probes: int = 0
    failed_probes: list[str] = field(default_factory=list)
    final_acyclic: bool = False
    final_problems: list[str] = field(default_factory=list)
    ops: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failed_probes and self.final_acyclic and not self.final_problems


def run_stress(cfg: StressConfig, on_probe=None) -> StressReport:
    """Run workers for ``cfg.duration`` seconds, auditing every ``probe_every``.

    At a probe every worker parks between two operations, so the audits see
    a quiescent graph.
    """
    keys = cfg.keys
    g = AcyclicGraph.from_snapshot(
        range(1, keys + 1), initial_edges(keys, cfg.initial_density, cfg.seed), die=cfg.die
    )
    pause = threading.Event()
    stop = threading.Event()
    barrier = threading.Barrier(cfg.threads + 1)
    # New vertices always get fresh keys, so no key returns after removal;
    # the other operations target a sliding window of the newest keys.
    fresh = itertools.count(keys + 1)
    top = [keys]
    counts = [0] * cfg.threads
    total = sum(cfg.mix)
    c1 = cfg.mix[0] / total
    c2 = c1 + cfg.mix[1] / total
    c3 = c2 + cfg.mix[2] / total
    errors = []

    def worker(tid):
        rng = random.Random(f"{cfg.seed}:{tid}")
        n = 0
        try:
            while not stop.is_set():
                if pause.is_set():
                    barrier.wait()  # parked for the probe
                    barrier.wait()  # probe done
                    continue
                r = rng.random()
                hi = top[0]
                lo = max(1, hi - keys + 1)
                u, v = rng.randint(lo, hi), rng.randint(lo, hi)
                if r < c1:
                    k = next(fresh)
                    g.add_vertex(k)
                    if k > top[0]:
                        top[0] = k
                elif r < c2:
                    g.remove_vertex(u)
                elif r < c3:
                    g.add_edge(u, v)
                else:
                    g.remove_edge(u, v)
                n += 1
        except BaseException as exc:
            errors.append(exc)
            barrier.abort()
        counts[tid] = n

    workers = [threading.Thread(target=worker, args=(i,), daemon=True) for i in range(cfg.threads)]
    for w in workers:
        w.start()
    report = StressReport()
    end = time.monotonic() + cfg.duration
    while True:
        left = end - time.monotonic()
        if left <= 0:
            break
        time.sleep(min(cfg.probe_every, left))
        pause.set()
        barrier.wait()
        report.probes += 1
        acyclic = audit_acyclicity(g)
        problems = audit_structure(g)
        if not acyclic:
            report.failed_probes.append(f"probe {report.probes}: cycle among confirmed edges")
        report.failed_probes.extend(f"probe {report.probes}: {p}" for p in problems)
        if on_probe is not None:
            on_probe(report.probes, acyclic, problems, g.stats.as_dict())
        pause.clear()
        barrier.wait()
    stop.set()
    for w in workers:
        w.join()
    if errors:
        raise errors[0]
    report.final_acyclic = audit_acyclicity(g)
    report.final_problems = audit_structure(g)
    report.ops = sum(counts)
    report.stats = g.stats.as_dict()
    return report
