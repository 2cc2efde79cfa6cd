import random
import threading
import time

import pytest

from concgraph import AcyclicGraph, EdgeStatus, bfs_path_exists
from concgraph.acyclic import LEGAL_TRANSITIONS
from concgraph.verify import PauseController, audit_acyclicity, audit_structure


def dag(*edges, die=False):
    verts = sorted({k for e in edges for k in e})
    return AcyclicGraph.from_snapshot(verts, edges, die=die)


def test_rejects_cycle_closing_edge():
    g = dag((1, 2), (2, 3))
    assert not g.add_edge(3, 1)
    assert not g.contains_edge(3, 1)
    assert g.add_edge(1, 3)
    assert g.stats.cycle_rejections == 1
    assert g.stats.false_positives == 0
    assert audit_structure(g) == []


def test_self_loop_rejected():
    g = dag((1, 2))
    assert not g.add_edge(1, 1)
    assert g.snapshot() == ([1, 2], [(1, 2)])


def test_existing_edge_is_true_without_cycle_check():
    g = dag((1, 2))
    assert g.add_edge(1, 2)
    assert g.stats.cycle_checks == 0


def test_missing_endpoint_is_false():
    g = dag((1, 2))
    assert not g.add_edge(1, 9)
    assert not g.remove_edge(9, 1)
    assert g.remove_edge(2, 1)  # absent edge between live vertices


def test_rollback_leaves_list_clean():
    g = AcyclicGraph.from_snapshot([3, 4, 5, 7], [(7, 5), (5, 3), (5, 4)])
    assert not g.add_edge(3, 7)
    v3 = next(v for v in g.iter_vertex_nodes() if v.val == 3)
    assert [e.val for e in g.iter_edge_nodes(v3)][1:-1] == []
    assert audit_structure(g) == []


def test_remove_then_readd_edge():
    g = dag((1, 2), (2, 3))
    assert g.remove_edge(2, 3)
    assert g.add_edge(3, 1)
    assert not g.add_edge(2, 3)


@pytest.mark.parametrize("die", [False, True])
def test_vertex_removal_breaks_paths(die):
    g = dag((1, 2), (2, 3), die=die)
    assert g.path_exists(1, 3)
    g.remove_vertex(2)
    assert not g.path_exists(1, 3)
    assert g.add_edge(3, 1)


def test_stale_edge_to_removed_vertex_not_followed():
    g = dag((1, 2), (2, 3))
    g.remove_vertex(2)  # NoDIE: node 1 keeps a stale 1->2 node
    assert not g.path_exists(1, 2)
    assert not g.path_exists(1, 3)


def test_path_exists_needs_nonempty_path():
    g = dag((1, 2))
    assert not g.path_exists(1, 1)
    assert g.path_exists(1, 2)
    assert not g.path_exists(2, 1)
    assert not g.path_exists(1, 42)


def test_status_transitions_are_legal():
    seen = []
    g = AcyclicGraph.from_snapshot(range(1, 30), [])
    g.status_monitor = lambda node, old, new: seen.append((old, new))

    def work(seed):
        rng = random.Random(seed)
        for _ in range(800):
            u, v = rng.randint(1, 29), rng.randint(1, 29)
            (g.add_edge if rng.random() < 0.6 else g.remove_edge)(u, v)

    ts = [threading.Thread(target=work, args=(s,)) for s in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert seen
    assert set(seen) <= LEGAL_TRANSITIONS
    assert audit_acyclicity(g)
    assert audit_structure(g) == []


def test_transit_edge_invisible_and_duplicate_add_waits():
    g = dag((1, 2))
    g.add_vertex(3)
    ctl = PauseController()
    g.hook = ctl
    ctl.spawn("owner", lambda: g.add_edge(2, 3))
    ctl.spawn("dup", lambda: g.add_edge(2, 3))
    ctl.spawn("look", lambda: g.contains_edge(2, 3))
    ctl.run_until("owner", "acyclic_add_edge.transit")
    v2 = next(v for v in g.iter_vertex_nodes() if v.val == 2)
    node = [e for e in g.iter_edge_nodes(v2) if e.val == 3][0]
    assert node.status is EdgeStatus.TRANSIT
    assert ctl.run_to_end("look") is False
    ctl.release("dup")
    time.sleep(0.1)
    assert not ctl.is_done("dup")  # waits for the owner's verdict
    assert ctl.run_to_end("owner") is True
    assert ctl.wait_done("dup")
    assert ctl.result("dup") is True
    assert g.contains_edge(2, 3)


def test_remove_waits_for_transit_neighbour():
    g = AcyclicGraph.from_snapshot([1, 2, 3], [(1, 3)])
    ctl = PauseController()
    g.hook = ctl
    ctl.spawn("add", lambda: g.add_edge(1, 2))
    ctl.spawn("rm", lambda: g.remove_edge(1, 3))
    ctl.run_until("add", "acyclic_add_edge.transit")
    ctl.release("rm")
    time.sleep(0.05)
    assert not ctl.is_done("rm")
    assert ctl.run_to_end("add") is True
    assert ctl.wait_done("rm") and ctl.result("rm") is True
    assert g.snapshot() == ([1, 2, 3], [(1, 2)])


def test_die_removes_added_incoming_edges():
    g = dag((1, 3), (2, 3), die=True)
    g.remove_vertex(3)
    for v in g.iter_vertex_nodes():
        if v.val in (1, 2):
            assert [e.val for e in g.iter_edge_nodes(v)][1:-1] == []


def test_single_thread_false_positives_zero():
    rng = random.Random(4)
    g = AcyclicGraph.from_snapshot(range(1, 41), [])
    for _ in range(5000):
        g.add_edge(rng.randint(1, 40), rng.randint(1, 40))
        if rng.random() < 0.3:
            g.remove_edge(rng.randint(1, 40), rng.randint(1, 40))
    assert g.stats.cycle_rejections > 0
    assert g.stats.false_positives == 0
    assert audit_acyclicity(g)


@pytest.mark.parametrize("seed", range(5))
def test_path_exists_matches_bfs(seed):
    rng = random.Random(seed)
    n = 60
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.05]
    rng.shuffle(edges)
    g = AcyclicGraph.from_snapshot(range(1, n + 1), edges)
    snap = g.snapshot()
    for _ in range(300):
        a, b = rng.randint(0, n + 1), rng.randint(0, n + 1)
        assert g.path_exists(a, b) == bfs_path_exists(snap, a, b)


def test_acyclic_aliases():
    g = dag((1, 2))
    assert g.acyclic_contains_edge(1, 2)
    assert not g.acyclic_add_edge(2, 1)
    assert g.acyclic_remove_edge(1, 2)
    assert g.acyclic_add_edge(2, 1)
