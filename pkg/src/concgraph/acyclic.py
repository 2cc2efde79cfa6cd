"""Acyclicity-preserving variant of :class:`ConcurrentGraph`.

An inserted edge starts in ``TRANSIT``. The inserter then runs a lock-free
reachability search from the edge's head back to its tail; if the search
succeeds the edge is rolled back (``MARKED``), otherwise it is confirmed
(``ADDED``). Reachability sees ``TRANSIT`` edges, so two racing inserts that
would close a cycle together cannot both be confirmed. Both may be rolled
back, which is the source of false positives.
"""

from __future__ import annotations

import threading
import time
from enum import IntEnum

from .core import SENTINEL_MAX, SENTINEL_MIN, ConcurrentGraph, _release, check_key


class EdgeStatus(IntEnum):
    TRANSIT = 0
    ADDED = 1
    MARKED = 2


TRANSIT = EdgeStatus.TRANSIT
ADDED = EdgeStatus.ADDED
MARKED = EdgeStatus.MARKED

LEGAL_TRANSITIONS = frozenset({(TRANSIT, ADDED), (TRANSIT, MARKED), (ADDED, MARKED)})


class AcyclicEdgeNode:
    __slots__ = ("val", "status", "enext", "lock")

    def __init__(self, val: int, enext=None, status: EdgeStatus = TRANSIT):
        self.val = val
        self.status = status
        self.enext = enext
        self.lock = threading.Lock()

    @property
    def marked(self) -> bool:
        return self.status is MARKED

    def __repr__(self):
        return f"AcyclicEdgeNode({self.val}, {self.status.name})"


class AcyclicGraph(ConcurrentGraph):
    """Concurrent graph whose confirmed edges never form a cycle.

    Vertex operations are inherited unchanged. ``add_edge`` may return False
    for an edge that would not have closed a cycle in any sequential order
    (false positive); such aborts are counted in ``stats.false_positives``
    when the detected path ran through another thread's ``TRANSIT`` edge.
    """

    acyclic = True

    def __init__(self, *args, **kwargs):
        # Optional callable(node, old, new) observing every status write.
        self.status_monitor = None
        super().__init__(*args, **kwargs)

    def _new_edge(self, val, enext=None):
        if val == SENTINEL_MIN or val == SENTINEL_MAX:
            return AcyclicEdgeNode(val, enext, ADDED)
        return AcyclicEdgeNode(val, enext)

    def _settle_bulk_edge(self, e) -> None:
        e.status = ADDED

    def _set_status(self, e, new: EdgeStatus) -> None:
        monitor = self.status_monitor
        if monitor is not None:
            monitor(e, e.status, new)
        e.status = new

    @staticmethod
    def _edge_visible(e) -> bool:
        return e.status is ADDED

    @staticmethod
    def _validate_edge(e1, e2) -> bool:
        # "Modified" validation: transit nodes are acceptable neighbours.
        return e1.status is not MARKED and e2.status is not MARKED and e1.enext is e2

    @staticmethod
    def _validate_added(e1, e2) -> bool:
        return e1.status is ADDED and e2.status is ADDED and e1.enext is e2

    def _acyclic_locate_edge(self, key1: int, key2: int, for_add: bool):
        found = self._help_search_edge(key1, key2)
        if found is None:
            return None
        v1, v2 = found
        if v1.marked or v2.marked:
            return None
        hook = self.hook
        if hook is not None:
            hook("locate_edge.checked")
        validate = self._validate_edge if for_add else self._validate_added
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
            if validate(e1, e2):
                if hook is not None:
                    hook("locate_edge.locked")
                return v1, v2, e1, e2
            _release(e1, e2)
            attempt += 1
            self._retry(attempt)
            if not for_add:
                # Waiting on a TRANSIT neighbour to be resolved by its owner.
                time.sleep(0)

    def _new_locate_edge(self, v1, key2: int, own):
        """Lock the predecessor of our own TRANSIT node ``own`` in v1's list.

        Does not re-check vertex liveness: v1 may have been removed meanwhile.
        """
        attempt = 0
        while True:
            e1 = v1.edge_head
            e2 = e1.enext
            while e2.val < key2:
                e1 = e2
                e2 = e2.enext
            e1.lock.acquire()
            e2.lock.acquire()
            if e2 is own and self._validate_edge(e1, e2):
                return e1, e2
            _release(e1, e2)
            attempt += 1
            self._retry(attempt)

    def add_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        hook = self.hook
        attempt = 0
        while True:
            loc = self._acyclic_locate_edge(key1, key2, for_add=True)
            if loc is None:
                return False
            v1, v2, e1, e2 = loc
            if e2.val == key2:
                pending = e2.status is TRANSIT
                _release(e1, e2)
                if not pending:
                    return True
                # Someone else's insert of the same edge is undecided; its
                # outcome decides ours, so wait for it.
                attempt += 1
                self._retry(attempt)
                time.sleep(0)
                continue
            own = AcyclicEdgeNode(key2, e2)
            e1.enext = own
            _release(e1, e2)
            break
        if hook is not None:
            hook("acyclic_add_edge.transit")
        self.stats.bump("cycle_checks")
        cycle, tainted = self._reach(key2, key1, own)
        if hook is not None:
            hook("acyclic_add_edge.checked")
        # A search that started or ran after an endpoint was removed proves
        # nothing; the add then fails as if it came after the removal.
        if not cycle and not (v1.marked or v2.marked):
            self._set_status(own, ADDED)
            return True
        ne1, ne2 = self._new_locate_edge(v1, key2, own)
        try:
            self._set_status(own, MARKED)
            ne1.enext = ne2.enext
            self._retire(own)
        finally:
            _release(ne1, ne2)
        if cycle:
            self.stats.bump("cycle_rejections")
            if tainted:
                self.stats.bump("false_positives")
        return False

    def remove_edge(self, key1: int, key2: int) -> bool:
        check_key(key1)
        check_key(key2)
        loc = self._acyclic_locate_edge(key1, key2, for_add=False)
        if loc is None:
            return False
        _, _, e1, e2 = loc
        try:
            if e2.val == key2:
                self._set_status(e2, MARKED)
                if self.hook is not None:
                    self.hook("remove_edge.marked")
                e1.enext = e2.enext
                self._retire(e2)
        finally:
            _release(e1, e2)
        return True

    acyclic_add_edge = add_edge
    acyclic_remove_edge = remove_edge
    acyclic_contains_edge = ConcurrentGraph.contains_edge

    def remove_incoming_edges(self, key: int) -> None:
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
                if self._validate_edge(e1, e2) and e2.status is ADDED:
                    self._set_status(e2, MARKED)
                    e1.enext = e2.enext
                    self._retire(e2)
                    _release(e1, e2)
                    break
                _release(e1, e2)
                attempt += 1
                self._retry(attempt)
                time.sleep(0)
            v = v.vnext

    # -- reachability -------------------------------------------------------

    def path_exists(self, key1: int, key2: int) -> bool:
        """True if key2 is reachable from key1 over one or more non-marked edges."""
        return self._reach(key1, key2)[0]

    def _reach(self, src: int, dst: int, own=None) -> tuple[bool, bool]:
        """Lock-free search from ``src`` for ``dst``.

        Expands the reach set level by level; each level locates its keys in
        one ascending sweep of the vertex list. Returns ``(found, tainted)``
        where ``tainted`` means the first path found crossed a TRANSIT edge
        other than ``own``.
        """
        hook = self.hook
        head = self.vertex_head
        v = head
        while v.val < src:
            v = v.vnext
        if v.val != src or v.marked:
            return False, False
        # Edge nodes into a removed vertex can outlive it, so reaching the key
        # is not enough: the target vertex itself must be live.
        t = head
        while t.val < dst:
            t = t.vnext
        if t.val != dst or t.marked:
            return False, False
        reach: dict[int, bool] = {}
        frontier: list[int] = []
        self._expand(v, False, reach, frontier, own)
        if dst in reach:
            return not t.marked, reach[dst]
        explored = {src}
        while frontier:
            level = sorted(k for k in frontier if k not in explored)
            explored.update(level)
            frontier = []
            v = head
            for k in level:
                while v.val < k:
                    v = v.vnext
                if v.val != k or v.marked:
                    continue
                if hook is not None:
                    hook("path_exists.expand")
                self._expand(v, reach[k], reach, frontier, own)
                if dst in reach:
                    return not t.marked, reach[dst]
        return False, False

    @staticmethod
    def _expand(vnode, tainted: bool, reach: dict, out: list, own) -> None:
        tail = vnode.edge_tail
        e = vnode.edge_head.enext
        while e is not tail and e is not None:
            st = e.status
            if st is not MARKED:
                k = e.val
                if k not in reach:
                    reach[k] = tainted or (st is TRANSIT and e is not own)
                    out.append(k)
            e = e.enext
