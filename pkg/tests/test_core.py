import random
import threading

import pytest

from concgraph import SENTINEL_MAX, SENTINEL_MIN, ConcurrentGraph, KeyDomainError
from concgraph.verify import PauseController, audit_structure


@pytest.fixture(params=[False, True], ids=["nodie", "die"])
def graph(request):
    return ConcurrentGraph(die=request.param)


def test_vertex_ops(graph):
    assert not graph.contains_vertex(5)
    assert graph.add_vertex(5)
    assert graph.add_vertex(5)  # idempotent
    assert graph.contains_vertex(5)
    assert graph.remove_vertex(5)
    assert not graph.remove_vertex(5)
    assert not graph.contains_vertex(5)


def test_edge_ops_need_both_endpoints(graph):
    graph.add_vertex(5)
    assert not graph.add_edge(5, 7)
    assert not graph.remove_edge(5, 7)
    assert not graph.contains_edge(5, 7)
    graph.add_vertex(7)
    assert graph.add_edge(5, 7)
    assert graph.add_edge(5, 7)
    assert graph.contains_edge(5, 7)
    assert not graph.contains_edge(7, 5)


def test_remove_absent_edge_between_live_vertices_is_true(graph):
    graph.add_vertex(5)
    graph.add_vertex(7)
    assert graph.remove_edge(5, 7)
    assert graph.snapshot() == ([5, 7], [])


def test_self_loop(graph):
    graph.add_vertex(3)
    assert graph.add_edge(3, 3)
    assert graph.contains_edge(3, 3)
    assert graph.remove_edge(3, 3)
    assert not graph.contains_edge(3, 3)


def test_edge_in_descending_key_order(graph):
    for k in (2, 9):
        graph.add_vertex(k)
    assert graph.add_edge(9, 2)
    assert graph.contains_edge(9, 2)
    assert graph.snapshot() == ([2, 9], [(9, 2)])


def test_removed_vertex_hides_incident_edges(graph):
    for k in (1, 2, 3):
        graph.add_vertex(k)
    graph.add_edge(1, 2)
    graph.add_edge(2, 3)
    graph.add_edge(3, 2)
    graph.remove_vertex(2)
    assert not graph.contains_edge(1, 2)
    assert not graph.contains_edge(2, 3)
    assert graph.snapshot() == ([1, 3], [])


def test_die_unlinks_incoming_edge_nodes():
    g = ConcurrentGraph.from_snapshot([1, 2, 3], [(1, 3), (2, 3), (1, 2)], die=True)
    g.remove_vertex(3)
    assert [e.val for e in g.iter_edge_nodes(g.vertex_head.vnext)] == [SENTINEL_MIN, 2, SENTINEL_MAX]


def test_nodie_leaves_stale_incoming_nodes():
    g = ConcurrentGraph.from_snapshot([1, 3], [(1, 3)])
    g.remove_vertex(3)
    vals = [e.val for e in g.iter_edge_nodes(g.vertex_head.vnext)]
    assert 3 in vals
    assert g.snapshot() == ([1], [])


def test_remove_vertex_die_override():
    g = ConcurrentGraph.from_snapshot([1, 3], [(1, 3)], die=False)
    g.remove_vertex(3, die=True)
    assert 3 not in [e.val for e in g.iter_edge_nodes(g.vertex_head.vnext)]


@pytest.mark.parametrize("bad", [SENTINEL_MIN, SENTINEL_MAX, True, 1.5, "3", None])
def test_key_domain(graph, bad):
    with pytest.raises(KeyDomainError):
        graph.add_vertex(bad)
    graph.add_vertex(1)
    with pytest.raises(KeyDomainError):
        graph.add_edge(1, bad)


def test_contains_accepts_any_key_without_raising(graph):
    assert not graph.contains_vertex(SENTINEL_MAX - 1)
    assert not graph.contains_vertex(SENTINEL_MIN + 1)


def test_from_snapshot_matches_incremental():
    verts = [9, 2, 5, 7]
    edges = [(2, 5), (9, 2), (5, 7), (7, 7), (5, 100)]
    bulk = ConcurrentGraph.from_snapshot(verts, edges)
    inc = ConcurrentGraph()
    for v in verts:
        inc.add_vertex(v)
    for u, v in edges:
        inc.add_edge(u, v)
    assert bulk.snapshot() == inc.snapshot() == ([2, 5, 7, 9], [(2, 5), (5, 7), (7, 7), (9, 2)])
    assert audit_structure(bulk) == []


def test_leak_mode_keeps_unlinked_nodes():
    g = ConcurrentGraph.from_snapshot([1, 2], [(1, 2)], reclamation="leak")
    g.remove_edge(1, 2)
    g.remove_vertex(2)
    assert len(g.retired) == 2
    assert ConcurrentGraph().retired is None
    with pytest.raises(ValueError):
        ConcurrentGraph(reclamation="epoch")


def test_retry_budget_counter():
    g = ConcurrentGraph(retry_budget=3)
    for attempt in range(1, 6):
        g._retry(attempt)
    assert g.stats.retries == 5
    assert g.stats.budget_exceeded == 1


def test_validation_failure_triggers_retry():
    # add_vertex(6) is parked after locating its window (5, 9); a concurrent
    # add_vertex(7) changes 5.vnext, so validation fails and it relocates.
    g = ConcurrentGraph.from_snapshot([5, 9], [])
    ctl = PauseController()
    g.hook = ctl
    ctl.spawn("a", lambda: g.add_vertex(6))
    ctl.spawn("b", lambda: g.add_vertex(7))
    ctl.run_until("a", "locate_vertex.traversed")
    ctl.run_to_end("b")
    assert ctl.run_to_end("a") is True
    assert g.stats.retries >= 1
    assert g.snapshot()[0] == [5, 6, 7, 9]


def test_concurrent_disjoint_inserts():
    g = ConcurrentGraph()

    def work(base):
        for k in range(base, base + 200):
            g.add_vertex(k)
        for k in range(base, base + 199):
            g.add_edge(k, k + 1)

    ts = [threading.Thread(target=work, args=(i * 1000,)) for i in range(4)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    verts, edges = g.snapshot()
    assert len(verts) == 800 and len(edges) == 796
    assert audit_structure(g) == []


def test_concurrent_mixed_ops_keep_structure():
    g = ConcurrentGraph.from_snapshot(range(1, 41), [(i, i + 1) for i in range(1, 40)], die=True)

    def work(seed):
        rng = random.Random(seed)
        for _ in range(2000):
            u, v = rng.randint(1, 60), rng.randint(1, 60)
            r = rng.random()
            if r < 0.05 and u > 40:
                g.add_vertex(u + 100 * seed)  # fresh per thread, never removed
            elif r < 0.1 and u <= 40:
                g.remove_vertex(u)
            elif r < 0.5:
                g.add_edge(u, v)
            elif r < 0.8:
                g.remove_edge(u, v)
            else:
                g.contains_edge(u, v)

    ts = [threading.Thread(target=work, args=(s,)) for s in range(1, 5)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert audit_structure(g) == []
