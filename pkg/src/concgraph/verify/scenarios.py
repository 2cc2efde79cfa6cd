"""Catalog of hand-scheduled races between graph operations.

Each scenario pins threads at pause points to force one specific
interleaving, records the history, and checks that it is linearizable
with the expected witness while the naive "order of completion" is not.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..acyclic import AcyclicGraph
from ..core import ConcurrentGraph
from .checker import Verdict, check_linearizable, replay_order
from .history import History, HistoryEvent, Recorder
from .schedule import ScriptedSchedule


@dataclass
class Scenario:
    name: str
    summary: str
    initial: tuple[list[int], list[tuple[int, int]]]
    ops: dict[str, tuple]  # thread -> (op, *args); thread names are "T<n>"
    steps: list
    expected: dict[str, bool]
    legal_order: list[str]
    naive_order: list[str] | None = None
    flip_must_fail: list[str] = field(default_factory=list)
    acyclic: bool = False
    die: bool = False
    relaxed: bool = False

    def make_graph(self):
        cls = AcyclicGraph if self.acyclic else ConcurrentGraph
        return cls.from_snapshot(*self.initial, die=self.die)


@dataclass
class ScenarioOutcome:
    scenario: Scenario
    results: dict[str, bool]
    history: History
    verdict: Verdict
    legal_order_ok: bool
    naive_order_rejected: bool
    flips_rejected: bool
    graph: object = None

    @property
    def passed(self) -> bool:
        return (
            self.results == self.scenario.expected
            and bool(self.verdict.linearizable)
            and self.legal_order_ok
            and self.naive_order_rejected
            and self.flips_rejected
        )


def _tid(name: str) -> int:
    return int(name.lstrip("T"))


def _flip(h: History, thread: int) -> History:
    events = [
        replace(ev, ret=not ev.ret) if ev.kind == "resp" and ev.thread == thread else ev
        for ev in h.events
    ]
    return History(events, h.initial, h.model)


def run_scenario(sc: Scenario, graph=None) -> ScenarioOutcome:
    graph = graph if graph is not None else sc.make_graph()
    rec = Recorder(graph)
    programs = {
        name: (lambda name=name, spec=spec: rec.call(_tid(name), spec[0], *spec[1:]))
        for name, spec in sc.ops.items()
    }
    results = ScriptedSchedule(sc.steps).run(graph, programs)
    model = "acyclic" if sc.acyclic else "plain"
    h = rec.history(model)
    relaxed = True if sc.relaxed else None
    verdict = check_linearizable(h, relaxed=relaxed)
    order = [_tid(t) for t in sc.legal_order]
    legal_ok = replay_order(h, order, relaxed=sc.relaxed, by="thread")
    naive_rejected = True
    if sc.naive_order is not None:
        naive = [_tid(t) for t in sc.naive_order]
        naive_rejected = not replay_order(h, naive, relaxed=sc.relaxed, by="thread")
    flips_rejected = all(
        check_linearizable(_flip(h, _tid(t)), relaxed=relaxed).linearizable is False
        for t in sc.flip_must_fail
    )
    return ScenarioOutcome(sc, results, h, verdict, legal_ok, naive_rejected, flips_rejected, graph)


def catalog() -> list[Scenario]:
    return [
        Scenario(
            "add_edge_rechecks_endpoints",
            "target is inserted and then the source removed while add_edge sits "
            "between its endpoint lookups; it still reaches the target through the "
            "removed source, and the post-lookup mark check makes it fail",
            initial=([5, 9], []),
            ops={"T1": ("add_edge", 5, 7), "T2": ("remove_vertex", 5), "T3": ("add_vertex", 7)},
            steps=[("T1", "help_search_edge.first"), ("T3", None), ("T2", None), ("T1", None)],
            expected={"T1": False, "T2": True, "T3": True},
            legal_order=["T3", "T2", "T1"],
        ),
        Scenario(
            "contains_vertex_misses_concurrent_add",
            "contains_vertex walks through a removed vertex while the key is inserted "
            "elsewhere; the false answer linearizes before the add",
            initial=([5, 9], []),
            ops={"T1": ("contains_vertex", 7), "T2": ("add_vertex", 7), "T3": ("remove_vertex", 5)},
            steps=[("T1", "contains_vertex.step", 1), ("T3", None), ("T2", None), ("T1", None)],
            expected={"T1": False, "T2": True, "T3": True},
            legal_order=["T3", "T1", "T2"],
            naive_order=["T3", "T2", "T1"],
        ),
        Scenario(
            "add_edge_before_vertex_removal",
            "add_edge has validated both endpoints when the target is removed; "
            "its true result linearizes before the removal",
            initial=([5, 7], []),
            ops={"T1": ("remove_vertex", 7), "T2": ("add_edge", 5, 7)},
            steps=[("T2", "locate_edge.locked"), ("T1", None), ("T2", None)],
            expected={"T1": True, "T2": True},
            legal_order=["T2", "T1"],
            naive_order=["T1", "T2"],
            die=True,
        ),
        Scenario(
            "failed_edge_ops_before_vertex_add",
            "add_edge and remove_edge have read past the target's slot when it is "
            "inserted; both false results linearize before the add",
            initial=([5, 9], []),
            ops={"T1": ("add_vertex", 7), "T2": ("add_edge", 5, 7), "T3": ("remove_edge", 5, 7)},
            steps=[
                ("T2", "help_search_edge.scan", 1),
                ("T3", "help_search_edge.scan", 1),
                ("T1", None),
                ("T2", None),
                ("T3", None),
            ],
            expected={"T1": True, "T2": False, "T3": False},
            legal_order=["T2", "T3", "T1"],
            naive_order=["T1", "T2", "T3"],
        ),
        Scenario(
            "remove_edge_before_vertex_removal",
            "the target vertex and its incoming edge are deleted while remove_edge "
            "holds validated endpoints; its true result linearizes first",
            initial=([5, 9], [(5, 9)]),
            ops={"T1": ("remove_vertex", 9), "T2": ("remove_edge", 5, 9)},
            steps=[("T2", "locate_edge.checked"), ("T1", None), ("T2", None)],
            expected={"T1": True, "T2": True},
            legal_order=["T2", "T1"],
            naive_order=["T1", "T2"],
            die=True,
        ),
        Scenario(
            "contains_edge_before_vertex_removal",
            "contains_edge finds a live edge node after its target vertex was removed; "
            "the true result linearizes before the removal",
            initial=([5, 9], [(5, 9)]),
            ops={"T1": ("remove_vertex", 9), "T2": ("contains_edge", 5, 9)},
            steps=[("T2", "contains_edge.vertices"), ("T1", None), ("T2", None)],
            expected={"T1": True, "T2": True},
            legal_order=["T2", "T1"],
            naive_order=["T1", "T2"],
        ),
        Scenario(
            "contains_edge_holds_stale_node",
            "contains_edge holds an edge node that is removed and replaced by a new "
            "node for the same edge; false linearizes between remove and re-add",
            initial=([5, 9], [(5, 9)]),
            ops={
                "T1": ("contains_edge", 5, 9),
                "T2": ("add_edge", 5, 9),
                "T3": ("remove_edge", 5, 9),
            },
            steps=[("T1", "contains_edge.found"), ("T3", None), ("T2", None), ("T1", None)],
            expected={"T1": False, "T2": True, "T3": True},
            legal_order=["T3", "T1", "T2"],
            naive_order=["T3", "T2", "T1"],
        ),
        Scenario(
            "edge_ops_ordered_around_vertex_removal",
            "add, remove and contains of one edge all pass their endpoint checks "
            "before the target vertex is removed; all linearize ahead of it",
            initial=([5, 7], []),
            ops={
                "T1": ("remove_vertex", 7),
                "T2": ("add_edge", 5, 7),
                "T3": ("remove_edge", 5, 7),
                "T4": ("contains_edge", 5, 7),
            },
            steps=[
                ("T2", "locate_edge.checked"),
                ("T3", "locate_edge.checked"),
                ("T4", "contains_edge.vertices"),
                ("T1", None),
                ("T2", None),
                ("T4", None),
                ("T3", None),
            ],
            expected={"T1": True, "T2": True, "T3": True, "T4": True},
            legal_order=["T2", "T4", "T3", "T1"],
            naive_order=["T1", "T2", "T4", "T3"],
        ),
        Scenario(
            "transit_edge_rolled_back_on_cycle",
            "an inserted edge waits in transit, invisible to contains_edge; the "
            "reachability check finds the back path and rolls it back, and a second "
            "insert into the same cycle is rejected too",
            initial=([3, 4, 5, 7], [(7, 5), (5, 3), (5, 4)]),
            ops={
                "T1": ("acyclic_add_edge", 3, 7),
                "T2": ("acyclic_add_edge", 4, 7),
                "T3": ("acyclic_contains_edge", 3, 7),
            },
            steps=[("T1", "acyclic_add_edge.transit"), ("T3", None), ("T2", None), ("T1", None)],
            expected={"T1": False, "T2": False, "T3": False},
            legal_order=["T3", "T2", "T1"],
            flip_must_fail=["T2"],
            acyclic=True,
        ),
        Scenario(
            "cycle_check_outlives_endpoint",
            "the target vertex is removed while an edge closing a cycle through it "
            "sits in transit; the search then finds nothing, and the insert must "
            "still fail because its endpoint is gone",
            initial=([4, 5], [(4, 5)]),
            ops={"T1": ("acyclic_add_edge", 5, 4), "T2": ("remove_vertex", 4)},
            steps=[("T1", "acyclic_add_edge.transit"), ("T2", None), ("T1", None)],
            expected={"T1": False, "T2": True},
            legal_order=["T2", "T1"],
            flip_must_fail=["T1"],
            acyclic=True,
        ),
    ]


def false_positive_race() -> Scenario:
    """Two inserts that together close a cycle both see each other's transit edge."""
    return Scenario(
        "racing_inserts_both_abort",
        "1->2 and 2->1 are both in transit when each runs its reachability check; "
        "both abort although one of them alone would have been fine",
        initial=([1, 2], []),
        ops={"T1": ("acyclic_add_edge", 1, 2), "T2": ("acyclic_add_edge", 2, 1)},
        steps=[
            ("T1", "acyclic_add_edge.transit"),
            ("T2", "acyclic_add_edge.transit"),
            ("T1", "acyclic_add_edge.checked"),
            ("T2", "acyclic_add_edge.checked"),
            ("T1", None),
            ("T2", None),
        ],
        expected={"T1": False, "T2": False},
        legal_order=["T1", "T2"],
        acyclic=True,
        relaxed=True,
    )


def forged_history(events) -> History:
    """Build a history from ``(ts, thread, op, args, kind, ret)`` tuples."""
    return History([HistoryEvent(*e) for e in events])
