"""Reference graphs behind the same interface as the concurrent ones.

:class:`SequentialGraph` is the executable sequential specification that the
differential tests and the linearizability checker replay against.
:class:`CoarseLockGraph` wraps it in one global lock.
"""

from __future__ import annotations

import threading
from collections import deque

from .core import Diagnostics, check_key


class SequentialGraph:
    """Single-threaded adjacency map; ``acyclic=True`` rejects cycle-closing edges."""

    def __init__(self, acyclic: bool = False, die: bool = True):
        # ``die`` is accepted for interface parity; removal always drops
        # incident edges here.
        self.acyclic = acyclic
        self._out: dict[int, set[int]] = {}
        self._in: dict[int, set[int]] = {}
        self.stats = Diagnostics()

    @classmethod
    def from_snapshot(cls, vertices, edges, acyclic: bool = False, **_):
        g = cls(acyclic=acyclic)
        for v in vertices:
            g._out[v] = set()
            g._in[v] = set()
        for u, v in edges:
            if u in g._out and v in g._out:
                g._out[u].add(v)
                g._in[v].add(u)
        return g

    def copy(self) -> SequentialGraph:
        g = SequentialGraph(self.acyclic)
        g._out = {k: set(s) for k, s in self._out.items()}
        g._in = {k: set(s) for k, s in self._in.items()}
        return g

    def freeze(self):
        """Hashable state: (vertices, edges)."""
        return (
            frozenset(self._out),
            frozenset((u, v) for u, s in self._out.items() for v in s),
        )

    def add_vertex(self, key: int) -> bool:
        check_key(key)
        if key not in self._out:
            self._out[key] = set()
            self._in[key] = set()
        return True

    def remove_vertex(self, key: int, die=None) -> bool:
        check_key(key)
        if key not in self._out:
            return False
        for dst in self._out.pop(key):
            self._in[dst].discard(key)
        for src in self._in.pop(key):
            self._out[src].discard(key)
        return True

    def contains_vertex(self, key: int) -> bool:
        return key in self._out

    def closes_cycle(self, key1: int, key2: int) -> bool:
        """Would inserting key1->key2 create a directed cycle?"""
        return key1 == key2 or self._reachable(key2, key1)

    def add_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        out = self._out.get(key1)
        if out is None or key2 not in self._out:
            return False
        if key2 in out:
            return True
        if self.acyclic:
            self.stats.cycle_checks += 1
            if self.closes_cycle(key1, key2):
                self.stats.cycle_rejections += 1
                return False
        out.add(key2)
        self._in[key2].add(key1)
        return True

    def remove_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        out = self._out.get(key1)
        if out is None or key2 not in self._out:
            return False
        if key2 in out:
            out.discard(key2)
            self._in[key2].discard(key1)
        return True

    def contains_edge(self, key1: int, key2: int) -> bool:
        out = self._out.get(key1)
        return out is not None and key2 in self._out and key2 in out

    def _reachable(self, src: int, dst: int) -> bool:
        # Path of length >= 0.
        if src == dst:
            return True
        return self.path_exists(src, dst)

    def path_exists(self, key1: int, key2: int) -> bool:
        """Path of length >= 1 from key1 to key2."""
        out = self._out
        succ = out.get(key1)
        if succ is None:
            return False
        if key2 in succ:
            return True
        seen = set(succ)
        queue = deque(succ)
        while queue:
            nxt = out[queue.popleft()]
            if key2 in nxt:
                return True
            for k in nxt:
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
        return False

    acyclic_add_edge = add_edge
    acyclic_remove_edge = remove_edge
    acyclic_contains_edge = contains_edge

    def snapshot(self) -> tuple[list[int], list[tuple[int, int]]]:
        verts = sorted(self._out)
        return verts, [(u, v) for u in verts for v in sorted(self._out[u])]


class CoarseLockGraph:
    """A :class:`SequentialGraph` serialized behind one lock."""

    def __init__(self, acyclic: bool = False, die: bool = True):
        self._g = SequentialGraph(acyclic)
        self._lock = threading.Lock()
        self.acyclic = acyclic
        self.stats = self._g.stats

    @classmethod
    def from_snapshot(cls, vertices, edges, acyclic: bool = False, **_):
        g = cls(acyclic)
        g._g = SequentialGraph.from_snapshot(vertices, edges, acyclic)
        g.stats = g._g.stats
        return g

    def add_vertex(self, key):
        with self._lock:
            return self._g.add_vertex(key)

    def remove_vertex(self, key, die=None):
        with self._lock:
            return self._g.remove_vertex(key)

    def contains_vertex(self, key):
        with self._lock:
            return self._g.contains_vertex(key)

    def add_edge(self, key1, key2):
        with self._lock:
            return self._g.add_edge(key1, key2)

    def remove_edge(self, key1, key2):
        with self._lock:
            return self._g.remove_edge(key1, key2)

    def contains_edge(self, key1, key2):
        with self._lock:
            return self._g.contains_edge(key1, key2)

    def path_exists(self, key1, key2):
        with self._lock:
            return self._g.path_exists(key1, key2)

    acyclic_add_edge = add_edge
    acyclic_remove_edge = remove_edge
    acyclic_contains_edge = contains_edge

    def snapshot(self):
        with self._lock:
            return self._g.snapshot()


def oracle_cycle_check(snapshot) -> bool:
    """True iff the ``(vertices, edges)`` snapshot contains a directed cycle."""
    vertices, edges = snapshot
    # Edges with an endpoint outside ``vertices`` are not part of the graph.
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].append(v)
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(adj, WHITE)
    for root in adj:
        if color[root] != WHITE:
            continue
        color[root] = GREY
        stack = [(root, iter(adj[root]))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                c = color[nxt]
                if c == GREY:
                    return True
                if c == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(adj[nxt])))
                    break
            else:
                color[node] = BLACK
                stack.pop()
    return False


def bfs_path_exists(snapshot, src: int, dst: int) -> bool:
    """Path of length >= 1 from src to dst in a ``(vertices, edges)`` snapshot."""
    vertices, edges = snapshot
    live = set(vertices)
    if src not in live or dst not in live:
        return False
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        if u in live and v in live:
            adj.setdefault(u, []).append(v)
    seen = set()
    queue = deque(adj.get(src, ()))
    while queue:
        k = queue.popleft()
        if k == dst:
            return True
        if k not in seen:
            seen.add(k)
            queue.extend(adj.get(k, ()))
    return False
