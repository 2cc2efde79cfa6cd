"""Small random concurrent programs, run for real and recorded as histories."""

from __future__ import annotations

import random
import sys
import threading
import time
from dataclasses import dataclass

from ..acyclic import AcyclicGraph
from ..core import ConcurrentGraph
from .history import History, Recorder

PLAIN_OPS = ("add_vertex", "remove_vertex", "add_edge", "remove_edge", "contains_vertex", "contains_edge")


@dataclass
class HistoryConfig:
    threads: tuple[int, int] = (2, 4)
    ops_per_thread: tuple[int, int] = (1, 6)
    key_range: int = 8
    acyclic: bool = False
    die: bool = False
    jitter: float = 0.5  # chance of yielding at each pause point
    switch_interval: float = 1e-6


@dataclass
class Program:
    initial: tuple[list[int], list[tuple[int, int]]]
    threads: list[list[tuple]]  # per thread: (op, *args)
    acyclic: bool = False
    die: bool = False

    def make_graph(self):
        cls = AcyclicGraph if self.acyclic else ConcurrentGraph
        return cls.from_snapshot(*self.initial, die=self.die)


def random_program(rng: random.Random, cfg: HistoryConfig) -> Program:
    """Draw an initial graph and per-thread op lists.

    Keys are split into a removable half (present initially, never added)
    and an addable half (never removed), so no key is reinserted after a
    removal.
    """
    keys = list(range(1, cfg.key_range + 1))
    rng.shuffle(keys)
    removable = sorted(keys[: len(keys) // 2])
    addable = sorted(keys[len(keys) // 2:])
    verts = sorted(removable + [k for k in addable if rng.random() < 0.5])
    edges = []
    for u in verts:
        for v in verts:
            if u == v or rng.random() >= 0.25:
                continue
            if cfg.acyclic and u > v:
                continue
            edges.append((u, v))
    prefix = "acyclic_" if cfg.acyclic else ""
    threads = []
    for _ in range(rng.randint(*cfg.threads)):
        ops = []
        for _ in range(rng.randint(*cfg.ops_per_thread)):
            op = rng.choice(PLAIN_OPS)
            if op == "add_vertex":
                ops.append((op, rng.choice(addable)))
            elif op == "remove_vertex":
                ops.append((op, rng.choice(removable)))
            elif op == "contains_vertex":
                ops.append((op, rng.randint(1, cfg.key_range)))
            else:
                u, v = rng.randint(1, cfg.key_range), rng.randint(1, cfg.key_range)
                ops.append((prefix + op, u, v))
        threads.append(ops)
    return Program((verts, edges), threads, cfg.acyclic, cfg.die)


def record(program: Program, jitter: float = 0.5, seed: int | None = None,
           switch_interval: float = 1e-6) -> tuple[History, object]:
    """Run every thread of ``program`` concurrently; return the history and graph."""
    graph = program.make_graph()
    rng = random.Random(seed)
    if jitter > 0:
        def hook(point, _r=rng.random, _sleep=time.sleep):
            if _r() < jitter:
                _sleep(0)
        graph.hook = hook
    rec = Recorder(graph)
    start = threading.Barrier(len(program.threads))
    errors = []

    def body(tid, ops):
        try:
            start.wait()
            for op, *args in ops:
                rec.call(tid, op, *args)
        except BaseException as exc:
            errors.append(exc)

    workers = [threading.Thread(target=body, args=(i + 1, ops)) for i, ops in enumerate(program.threads)]
    old = sys.getswitchinterval()
    sys.setswitchinterval(switch_interval)
    try:
        for w in workers:
            w.start()
        for w in workers:
            w.join()
    finally:
        sys.setswitchinterval(old)
        graph.hook = None
    if errors:
        raise errors[0]
    return rec.history("acyclic" if program.acyclic else "plain"), graph


def random_histories(n: int, cfg: HistoryConfig, seed: int = 0):
    """Yield ``(program, history, graph)`` for ``n`` random programs."""
    rng = random.Random(seed)
    for _ in range(n):
        prog = random_program(rng, cfg)
        h, g = record(prog, cfg.jitter, rng.random(), cfg.switch_interval)
        yield prog, h, g
