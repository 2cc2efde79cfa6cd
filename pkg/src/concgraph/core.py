"""Concurrent directed graph built from sorted lazy linked lists.

The vertex list and every per-vertex edge list are sorted singly linked
lists bracketed by sentinel nodes. Updates lock the two adjacent nodes they
touch (always the smaller key first), validate, then mutate; removal is
logical (set ``marked``) before it is physical (unlink). Membership queries
never lock.

CPython guarantees single-word atomicity for attribute reads and writes, so
``marked``, ``vnext`` and ``enext`` need no extra fencing here.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, fields

SENTINEL_MIN = -(2**63)
SENTINEL_MAX = 2**63 - 1


class KeyDomainError(ValueError):
    """A key is not an integer strictly between the two sentinels."""


def check_key(key) -> None:
    if isinstance(key, bool) or not isinstance(key, int):
        raise KeyDomainError(f"key must be an int, got {key!r}")
    if not SENTINEL_MIN < key < SENTINEL_MAX:
        raise KeyDomainError(f"key {key} collides with a sentinel")


@dataclass
class Diagnostics:
    """Read-mostly counters exposed to the benchmark harness."""

    retries: int = 0
    budget_exceeded: int = 0
    cycle_checks: int = 0
    cycle_rejections: int = 0
    false_positives: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def bump(self, name: str, n: int = 1) -> None:
        with self._lock:
            setattr(self, name, getattr(self, name) + n)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self) if not f.name.startswith("_")}


class EdgeNode:
    __slots__ = ("val", "marked", "enext", "lock")

    def __init__(self, val: int, enext: EdgeNode | None = None):
        self.val = val
        self.marked = False
        self.enext = enext
        self.lock = threading.Lock()

    def __repr__(self):
        return f"EdgeNode({self.val}, marked={self.marked})"


class VertexNode:
    __slots__ = ("val", "marked", "vnext", "edge_head", "edge_tail", "lock")

    def __init__(self, val: int, edge_head, edge_tail, vnext: VertexNode | None = None):
        self.val = val
        self.marked = False
        self.vnext = vnext
        self.edge_head = edge_head
        self.edge_tail = edge_tail
        self.lock = threading.Lock()

    def __repr__(self):
        return f"VertexNode({self.val}, marked={self.marked})"


def _release(a, b) -> None:
    a.lock.release()
    b.lock.release()


class ConcurrentGraph:
    """Fine-grained concurrent adjacency list.

    Args:
        die: default for ``remove_vertex``: also delete the incoming edges of
            a removed vertex with a full scan of the vertex list.
        reclamation: ``"refcount"`` lets CPython free unlinked nodes once no
            traversal references them; ``"leak"`` keeps every unlinked node
            alive in ``retired`` (nothing is ever freed).
        retry_budget: per-call validation retry count above which
            ``stats.budget_exceeded`` is bumped. Retrying itself is unbounded.
    """

    acyclic = False

    def __init__(self, die: bool = False, reclamation: str = "refcount", retry_budget: int = 1000):
        if reclamation not in ("refcount", "leak"):
            raise ValueError(f"unknown reclamation policy {reclamation!r}")
        self.die = die
        self.reclamation = reclamation
        self.retired: list | None = [] if reclamation == "leak" else None
        self.retry_budget = retry_budget
        self.stats = Diagnostics()
        # Test-only pause points: a callable taking the point name.
        self.hook = None
        self.vertex_tail = self._new_vertex(SENTINEL_MAX)
        self.vertex_head = self._new_vertex(SENTINEL_MIN, self.vertex_tail)

    # -- construction helpers -------------------------------------------

    def _new_edge(self, val: int, enext=None):
        return EdgeNode(val, enext)

    def _new_vertex(self, val: int, vnext=None) -> VertexNode:
        tail = self._new_edge(SENTINEL_MAX)
        head = self._new_edge(SENTINEL_MIN, tail)
        return VertexNode(val, head, tail, vnext)

    @classmethod
    def from_snapshot(cls, vertices, edges, **kwargs):
        """Bulk-build a graph in one pass. Only valid before it is shared."""
        g = cls(**kwargs)
        adj: dict[int, set[int]] = {}
        for v in vertices:
            check_key(v)
            adj.setdefault(v, set())
        for u, v in edges:
            if u in adj and v in adj:
                adj[u].add(v)
        prev = g.vertex_head
        for key in sorted(adj):
            node = g._new_vertex(key)
            eprev = node.edge_head
            for dst in sorted(adj[key]):
                e = g._new_edge(dst)
                g._settle_bulk_edge(e)
                eprev.enext = e
                eprev = e
            eprev.enext = node.edge_tail
            prev.vnext = node
            prev = node
        prev.vnext = g.vertex_tail
        return g

    def _settle_bulk_edge(self, e) -> None:
        pass

    def _retire(self, node) -> None:
        if self.retired is not None:
            self.retired.append(node)

    def _retry(self, attempt: int) -> None:
        self.stats.bump("retries")
        if attempt == self.retry_budget:
            self.stats.bump("budget_exceeded")

    # -- vertex list --------------------------------------------------------

    def _locate_vertex(self, key: int):
        """Return locked ``(pred, curr)`` with ``pred.val < key <= curr.val``."""
        hook = self.hook
        attempt = 0
        while True:
            pred = self.vertex_head
            curr = pred.vnext
            while curr.val < key:
                pred = curr
                curr = curr.vnext
            if hook is not None:
                hook("locate_vertex.traversed")
            pred.lock.acquire()
            curr.lock.acquire()
            if not pred.marked and not curr.marked and pred.vnext is curr:
                return pred, curr
            _release(pred, curr)
            attempt += 1
            self._retry(attempt)

    def add_vertex(self, key: int) -> bool:
        check_key(key)
        pred, curr = self._locate_vertex(key)
        try:
            if curr.val != key:
                node = self._new_vertex(key, curr)
                if self.hook is not None:
                    self.hook("add_vertex.located")
                pred.vnext = node
        finally:
            _release(pred, curr)
        return True

    def remove_vertex(self, key: int, die: bool | None = None) -> bool:
        check_key(key)
        pred, curr = self._locate_vertex(key)
        try:
            if curr.val != key:
                return False
            curr.marked = True
            if self.hook is not None:
                self.hook("remove_vertex.marked")
            pred.vnext = curr.vnext
            self._retire(curr)
        finally:
            _release(pred, curr)
        if self.hook is not None:
            self.hook("remove_vertex.unlinked")
        if self.die if die is None else die:
            self.remove_incoming_edges(key)
        return True

    def remove_incoming_edges(self, key: int) -> None:
        """Delete every edge node pointing at ``key``.

        One validated pass per vertex; vertices inserted behind the cursor
        during the scan can be missed.
        """
        tail = self.vertex_tail
        v = self.vertex_head.vnext
        while v is not tail:
            attempt = 0
            while True:
                e1 = v.edge_head
                e2 = e1.enext
                while e2.val < key:
                    e1 = e2
                    e2 = e2.enext
                if e2.val != key:
                    break
                e1.lock.acquire()
                e2.lock.acquire()
                if not e1.marked and not e2.marked and e1.enext is e2:
                    e2.marked = True
                    e1.enext = e2.enext
                    self._retire(e2)
                    _release(e1, e2)
                    break
                _release(e1, e2)
                attempt += 1
                self._retry(attempt)
            v = v.vnext

    def contains_vertex(self, key: int) -> bool:
        hook = self.hook
        v = self.vertex_head
        while v.val < key:
            v = v.vnext
            if hook is not None:
                hook("contains_vertex.step")
        return v.val == key and not v.marked

    # -- edge lists ---------------------------------------------------------

    def _help_search_edge(self, key1: int, key2: int):
        """Find both endpoint vertices, smaller key first.

        Returns ``(v1, v2)`` or None if either is absent or marked when read.
        """
        hook = self.hook
        if key1 == key2:
            v = self.vertex_head
            while v.val < key1:
                v = v.vnext
            if v.val != key1 or v.marked:
                return None
            if hook is not None:
                hook("help_search_edge.first")
            return v, v
        lo, hi = (key1, key2) if key1 < key2 else (key2, key1)
        a = self.vertex_head
        while a.val < lo:
            a = a.vnext
        if a.val != lo or a.marked:
            return None
        if hook is not None:
            hook("help_search_edge.first")
        b = a.vnext
        if hook is not None:
            hook("help_search_edge.scan")
        while b.val < hi:
            b = b.vnext
            if hook is not None:
                hook("help_search_edge.scan")
        if b.val != hi or b.marked:
            return None
        return (a, b) if key1 < key2 else (b, a)

    def _locate_edge(self, key1: int, key2: int):
        """Return ``(v1, v2, e1, e2)`` with the two edge nodes locked, or None."""
        found = self._help_search_edge(key1, key2)
        if found is None:
            return None
        v1, v2 = found
        # Endpoints may have been removed after the helper read them.
        if v1.marked or v2.marked:
            return None
        hook = self.hook
        if hook is not None:
            hook("locate_edge.checked")
        attempt = 0
        while True:
            e1 = v1.edge_head
            e2 = e1.enext
            while e2.val < key2:
                e1 = e2
                e2 = e2.enext
            if hook is not None:
                hook("locate_edge.traversed")
            e1.lock.acquire()
            e2.lock.acquire()
            if self._validate_edge(e1, e2):
                if hook is not None:
                    hook("locate_edge.locked")
                return v1, v2, e1, e2
            _release(e1, e2)
            attempt += 1
            self._retry(attempt)

    @staticmethod
    def _validate_edge(e1, e2) -> bool:
        return not e1.marked and not e2.marked and e1.enext is e2

    @staticmethod
    def _validate_vertex(v1, v2) -> bool:
        return not v1.marked and not v2.marked and v1.vnext is v2

    def add_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        loc = self._locate_edge(key1, key2)
        if loc is None:
            return False
        _, _, e1, e2 = loc
        try:
            if e2.val != key2:
                e1.enext = self._new_edge(key2, e2)
        finally:
            _release(e1, e2)
        return True

    def remove_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        loc = self._locate_edge(key1, key2)
        if loc is None:
            return False
        _, _, e1, e2 = loc
        try:
            if e2.val == key2:
                e2.marked = True
                if self.hook is not None:
                    self.hook("remove_edge.marked")
                e1.enext = e2.enext
                self._retire(e2)
        finally:
            _release(e1, e2)
        return True

    def contains_edge(self, key1: int, key2: int) -> bool:
        found = self._help_search_edge(key1, key2)
        if found is None:
            return False
        hook = self.hook
        if hook is not None:
            hook("contains_edge.vertices")
        e = found[0].edge_head
        while e.val < key2:
            e = e.enext
        if hook is not None:
            hook("contains_edge.found")
        return e.val == key2 and self._edge_visible(e)

    @staticmethod
    def _edge_visible(e) -> bool:
        return not e.marked

    # -- auditing -----------------------------------------------------------

    def snapshot(self) -> tuple[list[int], list[tuple[int, int]]]:
        """Abstract graph at quiescence: live vertices, edges between live vertices."""
        verts = []
        nodes = []
        v = self.vertex_head.vnext
        while v is not self.vertex_tail:
            if not v.marked:
                verts.append(v.val)
                nodes.append(v)
            v = v.vnext
        live = set(verts)
        edges = []
        for node in nodes:
            e = node.edge_head.enext
            while e is not node.edge_tail:
                if self._edge_visible(e) and e.val in live:
                    edges.append((node.val, e.val))
                e = e.enext
        return verts, edges

    def iter_vertex_nodes(self):
        """Every node on the vertex chain, sentinels included."""
        v = self.vertex_head
        while v is not None:
            yield v
            v = v.vnext

    @staticmethod
    def iter_edge_nodes(vnode):
        e = vnode.edge_head
        while e is not None:
            yield e
            e = e.enext
