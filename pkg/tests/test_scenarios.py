import pytest

from concgraph import ConcurrentGraph
from concgraph.core import _release
from concgraph.verify import (
    PauseController,
    ScheduleError,
    ScheduleTimeout,
    ScriptedSchedule,
    catalog,
    false_positive_race,
    run_scenario,
)

CATALOG = {sc.name: sc for sc in catalog()}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_scripted_race(name):
    sc = CATALOG[name]
    out = run_scenario(sc)
    assert out.results == sc.expected
    assert out.verdict.linearizable, str(out.verdict)
    assert out.legal_order_ok
    assert out.naive_order_rejected
    assert out.flips_rejected
    assert not out.verdict.relaxed_needed


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_scripted_race_is_deterministic(name):
    sc = CATALOG[name]
    assert {run_scenario(sc).passed for _ in range(3)} == {True}


def test_racing_inserts_need_relaxed_spec():
    sc = false_positive_race()
    out = run_scenario(sc)
    assert out.passed
    assert out.verdict.relaxed_needed
    assert out.graph.stats.false_positives == 2
    assert out.graph.snapshot() == ([1, 2], [])


class _NoRecheck(ConcurrentGraph):
    """add_edge without the endpoint re-check after the vertex lookups."""

    def add_edge(self, key1, key2):
        found = self._help_search_edge(key1, key2)
        if found is None:
            return False
        v1, _ = found
        e1 = v1.edge_head
        e2 = e1.enext
        while e2.val < key2:
            e1, e2 = e2, e2.enext
        e1.lock.acquire()
        e2.lock.acquire()
        try:
            if e2.val != key2:
                e1.enext = self._new_edge(key2, e2)
        finally:
            _release(e1, e2)
        return True


def test_recheck_decides_the_outcome():
    sc = CATALOG["add_edge_rechecks_endpoints"]
    g = _NoRecheck.from_snapshot(*sc.initial)
    out = run_scenario(sc, graph=g)
    # Without the re-check the add goes through via the removed source.
    assert out.results["T1"] is True


def test_schedule_errors():
    g = ConcurrentGraph.from_snapshot([1], [])
    with pytest.raises(ScheduleError):
        ScriptedSchedule([("a", "no.such.point")], timeout=1).run(g, {"a": lambda: g.add_vertex(2)})
    ctl = PauseController(timeout=0.2)
    g.hook = ctl
    ctl.spawn("a", lambda: g.add_vertex(3))
    with pytest.raises(ScheduleError):
        ctl.spawn("a", lambda: None)
    ctl.run_until("a", "add_vertex.located")
    ctl.spawn("b", lambda: g.add_vertex(2))  # needs the lock "a" holds
    ctl.release("b")
    assert not ctl.wait_done("b", timeout=0.1)
    with pytest.raises(ScheduleTimeout):
        ctl.run_to_end("b")
    ctl.finish_all()
    assert g.snapshot()[0] == [1, 2, 3]


def test_exceptions_surface():
    g = ConcurrentGraph()
    with pytest.raises(ValueError):
        ScriptedSchedule([("a", None)]).run(g, {"a": lambda: g.add_vertex(True)})
