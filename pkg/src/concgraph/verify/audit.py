from __future__ import annotations

from ..acyclic import EdgeStatus
from ..baselines import oracle_cycle_check
from ..core import SENTINEL_MAX, SENTINEL_MIN


def audit_acyclicity(graph_or_snapshot) -> bool:
    """True if the confirmed edges among live vertices form no cycle.

    Accepts a graph (snapshotted here, so call it at quiescence or with the
    workers paused) or a ``(vertices, edges)`` pair.
    """
    if hasattr(graph_or_snapshot, "snapshot"):
        snap = graph_or_snapshot.snapshot()
    else:
        snap = graph_or_snapshot
    return not oracle_cycle_check(snap)


def audit_structure(graph) -> list[str]:
    """Structural invariants of a quiescent concurrent graph; returns violations."""
    problems = []
    head, tail = graph.vertex_head, graph.vertex_tail
    if head.val != SENTINEL_MIN or tail.val != SENTINEL_MAX:
        problems.append("vertex sentinels carry wrong keys")
    if head.marked or tail.marked:
        problems.append("vertex sentinel marked")
    prev = None
    live = set()
    for v in graph.iter_vertex_nodes():
        if prev is not None and not prev.val < v.val:
            problems.append(f"vertex list not strictly ascending at {prev.val} -> {v.val}")
        prev = v
        if v is head or v is tail:
            continue
        if v.marked:
            problems.append(f"marked vertex {v.val} still linked at quiescence")
        elif v.val in live:
            problems.append(f"duplicate live vertex {v.val}")
        live.add(v.val)
        eprev = None
        for e in graph.iter_edge_nodes(v):
            if eprev is not None and not eprev.val < e.val:
                problems.append(f"edge list of {v.val} not ascending at {eprev.val} -> {e.val}")
            eprev = e
            if e.marked:
                problems.append(f"marked edge {v.val}->{e.val} still linked at quiescence")
            if getattr(e, "status", None) is EdgeStatus.TRANSIT:
                problems.append(f"edge {v.val}->{e.val} left in transit")
        if eprev is not v.edge_tail:
            problems.append(f"edge list of {v.val} does not end at its tail sentinel")
    if prev is not tail:
        problems.append("vertex list does not end at the tail sentinel")
    return problems
