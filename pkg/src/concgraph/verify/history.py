"""Invocation/response histories and their text serialization.

One event per line, fields in a fixed order::

    ts thread op args kind ret

``args`` is a comma-joined key list, ``kind`` is ``inv`` or ``resp``, and
``ret`` is ``true``/``false`` on responses and ``-`` on invocations. Lines
starting with ``#`` carry optional header directives::

    # model acyclic
    # vertices 1 2 5
    # edges 1>2 2>5
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path


class RecorderOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class HistoryEvent:
    ts: int
    thread: int
    op: str
    args: tuple[int, ...]
    kind: str  # "inv" | "resp"
    ret: bool | None = None


@dataclass
class Operation:
    """An invocation paired with its response (``ret`` None while pending)."""

    id: int
    thread: int
    op: str
    args: tuple[int, ...]
    ret: bool | None
    inv: float
    resp: float = math.inf

    @property
    def pending(self) -> bool:
        return self.resp == math.inf

    def label(self) -> str:
        r = "?" if self.ret is None else str(self.ret).lower()
        return f"T{self.thread}.{self.op}({','.join(map(str, self.args))})={r}"


@dataclass
class History:
    events: list[HistoryEvent] = field(default_factory=list)
    initial: tuple[list[int], list[tuple[int, int]]] = field(default_factory=lambda: ([], []))
    model: str | None = None  # "plain" | "acyclic"; None means infer from op names

    def __len__(self):
        return len(self.events)

    def is_well_formed(self) -> bool:
        last_ts = -math.inf
        open_inv: dict[int, HistoryEvent] = {}
        for ev in self.events:
            if ev.ts < last_ts:
                return False
            last_ts = ev.ts
            if ev.kind == "inv":
                if ev.thread in open_inv:
                    return False
                open_inv[ev.thread] = ev
            elif ev.kind == "resp":
                inv = open_inv.pop(ev.thread, None)
                if inv is None or inv.op != ev.op or inv.args != ev.args:
                    return False
            else:
                return False
        return True

    def operations(self) -> list[Operation]:
        ops: list[Operation] = []
        open_op: dict[int, Operation] = {}
        for ev in self.events:
            if ev.kind == "inv":
                op = Operation(len(ops), ev.thread, ev.op, ev.args, None, ev.ts)
                ops.append(op)
                open_op[ev.thread] = op
            else:
                op = open_op.pop(ev.thread)
                op.ret = ev.ret
                op.resp = ev.ts
        return ops

    def infer_model(self) -> str:
        if self.model:
            return self.model
        return "acyclic" if any(ev.op.startswith("acyclic_") for ev in self.events) else "plain"

    # -- text form ----------------------------------------------------------

    def dumps(self) -> str:
        lines = []
        if self.model:
            lines.append(f"# model {self.model}")
        verts, edges = self.initial
        lines.append("# vertices " + " ".join(map(str, verts)))
        lines.append("# edges " + " ".join(f"{u}>{v}" for u, v in edges))
        for ev in self.events:
            ret = "-" if ev.ret is None else str(ev.ret).lower()
            args = ",".join(map(str, ev.args)) or "-"
            lines.append(f"{ev.ts} {ev.thread} {ev.op} {args} {ev.kind} {ret}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> History:
        h = cls()
        verts: list[int] = []
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if not parts:
                    continue
                if parts[0] == "model":
                    h.model = parts[1]
                elif parts[0] == "vertices":
                    verts = [int(p) for p in parts[1:]]
                elif parts[0] == "edges":
                    edges = [tuple(int(x) for x in p.split(">")) for p in parts[1:]]
                continue
            fields_ = line.split()
            if len(fields_) != 6:
                raise ValueError(f"line {lineno}: expected 6 fields, got {len(fields_)}")
            ts, thread, op, args, kind, ret = fields_
            if kind not in ("inv", "resp"):
                raise ValueError(f"line {lineno}: bad kind {kind!r}")
            h.events.append(
                HistoryEvent(
                    int(ts),
                    int(thread),
                    op,
                    () if args == "-" else tuple(int(a) for a in args.split(",")),
                    kind,
                    None if ret == "-" else ret == "true",
                )
            )
        h.initial = (verts, edges)
        return h

    def write(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def read(cls, path) -> History:
        return cls.loads(Path(path).read_text())


class Recorder:
    """Wraps a graph and logs every call made through :meth:`call`.

    Each thread appends to its own buffer; :meth:`history` merges them by
    timestamp. Op names are graph method names (``acyclic_*`` aliases select
    the acyclic specification at check time).
    """

    def __init__(self, graph, capacity: int = 100_000, clock=time.perf_counter_ns):
        self.graph = graph
        self.capacity = capacity
        self.clock = clock
        self._buffers: dict[int, list[HistoryEvent]] = {}
        self._count = 0
        self._lock = threading.Lock()
        self.initial = graph.snapshot()

    def _buffer(self, thread: int) -> list[HistoryEvent]:
        buf = self._buffers.get(thread)
        if buf is None:
            with self._lock:
                buf = self._buffers.setdefault(thread, [])
        return buf

    def call(self, thread: int, op: str, *args: int):
        buf = self._buffer(thread)
        self._count += 2
        if self._count > self.capacity:
            raise RecorderOverflow(f"more than {self.capacity} events recorded")
        method = getattr(self.graph, op)
        buf.append(HistoryEvent(self.clock(), thread, op, args, "inv"))
        ret = method(*args)
        buf.append(HistoryEvent(self.clock(), thread, op, args, "resp", ret))
        return ret

    def history(self, model: str | None = None) -> History:
        events = [ev for buf in self._buffers.values() for ev in buf]
        # Stable: a thread's own inv/resp pair keeps its order on equal stamps.
        events.sort(key=lambda ev: ev.ts)
        return History(events, self.initial, model)
