import random
from dataclasses import replace

from hypothesis import given, settings
from hypothesis import strategies as st

from concgraph import ConcurrentGraph
from concgraph.verify import (
    History,
    HistoryEvent,
    Recorder,
    brute_force_linearizable,
    check_linearizable,
    complete_history,
    replay_order,
)


def forge(ops, initial=([], []), model=None):
    """``ops``: (thread, op, args, ret, inv, resp); resp None leaves it pending."""
    events = []
    for th, op, args, ret, inv, resp in ops:
        events.append(HistoryEvent(inv, th, op, args, "inv"))
        if resp is not None:
            events.append(HistoryEvent(resp, th, op, args, "resp", ret))
    events.sort(key=lambda e: e.ts)
    return History(events, initial, model)


def test_single_thread_history():
    h = forge([(1, "add_vertex", (1,), True, 0, 1), (1, "contains_vertex", (1,), True, 2, 3)])
    v = check_linearizable(h)
    assert v.linearizable and len(v.witness) == 2


def test_failed_edge_ops_around_vertex_add():
    h = forge(
        [
            (1, "add_vertex", (7,), True, 0, 10),
            (2, "add_edge", (5, 7), False, 1, 9),
            (3, "remove_edge", (5, 7), False, 2, 8),
        ],
        initial=([5], []),
    )
    assert check_linearizable(h).linearizable
    assert replay_order(h, [2, 3, 1], by="thread")
    assert not replay_order(h, [1, 2, 3], by="thread")


def test_real_time_violation_rejected():
    h = forge([(1, "add_vertex", (4,), True, 0, 1), (2, "contains_vertex", (4,), False, 2, 3)])
    assert check_linearizable(h).linearizable is False
    assert not brute_force_linearizable(h)


def test_overlap_makes_it_legal():
    h = forge([(1, "add_vertex", (4,), True, 0, 3), (2, "contains_vertex", (4,), False, 1, 2)])
    assert check_linearizable(h).linearizable


def test_equal_timestamps_count_as_overlap():
    h = forge([(1, "add_vertex", (4,), True, 0, 5), (2, "contains_vertex", (4,), False, 5, 6)])
    assert check_linearizable(h).linearizable


def test_pending_op_may_take_effect():
    h = forge([(1, "add_vertex", (3,), None, 0, None), (2, "contains_vertex", (3,), True, 1, 2)])
    assert len(complete_history(h)) == 2
    assert check_linearizable(h).linearizable


def test_pending_op_may_be_dropped():
    h = forge([(1, "remove_vertex", (3,), None, 0, None), (2, "contains_vertex", (3,), True, 1, 2)], ([3], []))
    assert check_linearizable(h).linearizable


def test_budget_gives_inconclusive():
    ops = [(t, "add_vertex", (t,), True, 0, 100) for t in range(1, 9)]
    ops.append((9, "contains_vertex", (99,), True, 1, 2))  # never true: forces a full search
    v = check_linearizable(forge(ops), budget=50)
    assert v.inconclusive and "inconclusive" in str(v)


def test_relaxed_acyclic_false_positive():
    h = forge([(1, "acyclic_add_edge", (1, 2), False, 0, 1)], ([1, 2], []))
    assert check_linearizable(h, relaxed=False).linearizable is False
    v = check_linearizable(h)
    assert v.linearizable and v.relaxed_needed
    # Relaxation never excuses a missing edge when the add reported success.
    h2 = forge([(1, "acyclic_add_edge", (1, 2), True, 0, 1), (1, "acyclic_contains_edge", (1, 2), False, 2, 3)], ([1, 2], []))
    assert check_linearizable(h2).linearizable is False


def test_acyclic_cycle_rejection_is_strict_legal():
    h = forge([(1, "acyclic_add_edge", (2, 1), False, 0, 1)], ([1, 2], [(1, 2)]))
    v = check_linearizable(h)
    assert v.linearizable and not v.relaxed_needed


def _sequential_history(seed, n=12):
    rng = random.Random(seed)
    g = ConcurrentGraph.from_snapshot([1, 2, 3], [(1, 2)])
    rec = Recorder(g)
    fresh = iter(range(4, 100))
    for _ in range(n):
        r = rng.random()
        a, b = rng.randint(1, 6), rng.randint(1, 6)
        if r < 0.15:
            rec.call(1, "add_vertex", next(fresh))
        elif r < 0.25:
            rec.call(1, "remove_vertex", rng.randint(1, 3))
        elif r < 0.5:
            rec.call(1, "add_edge", a, b)
        elif r < 0.7:
            rec.call(1, "remove_edge", a, b)
        elif r < 0.85:
            rec.call(1, "contains_edge", a, b)
        else:
            rec.call(1, "contains_vertex", a)
    return rec.history("plain")


def test_mutated_sequential_histories_rejected():
    for seed in range(40):
        h = _sequential_history(seed)
        assert check_linearizable(h).linearizable
        resp_idx = [i for i, e in enumerate(h.events) if e.kind == "resp"]
        i = random.Random(seed).choice(resp_idx)
        events = list(h.events)
        events[i] = replace(events[i], ret=not events[i].ret)
        assert check_linearizable(History(events, h.initial, h.model)).linearizable is False


OP_CHOICES = [
    ("add_vertex", 1),
    ("remove_vertex", 1),
    ("contains_vertex", 1),
    ("add_edge", 2),
    ("remove_edge", 2),
    ("contains_edge", 2),
]


@st.composite
def small_histories(draw):
    nthreads = draw(st.integers(1, 3))
    per_thread = []
    for t in range(nthreads):
        ops = []
        for _ in range(draw(st.integers(1, 2))):
            name, arity = draw(st.sampled_from(OP_CHOICES))
            args = tuple(draw(st.integers(1, 3)) for _ in range(arity))
            ops.append((name, args, draw(st.booleans())))
        per_thread.append(ops)
    # Random interleaving of each thread's inv/resp sequence.
    queues = [[(t + 1, op, kind) for op in ops for kind in ("inv", "resp")] for t, ops in enumerate(per_thread)]
    events = []
    ts = 0
    while any(queues):
        i = draw(st.sampled_from([j for j, q in enumerate(queues) if q]))
        th, (name, args, ret), kind = queues[i].pop(0)
        ts += draw(st.integers(0, 1))
        events.append(HistoryEvent(ts, th, name, args, kind, ret if kind == "resp" else None))
    verts = sorted(draw(st.sets(st.integers(1, 3))))
    edges = sorted(draw(st.sets(st.tuples(st.sampled_from(verts), st.sampled_from(verts))))) if verts else []
    model = draw(st.sampled_from(["plain", "acyclic"]))
    if model == "acyclic":
        edges = [(u, v) for u, v in edges if u < v]
    return History(events, (verts, edges), model)


@settings(max_examples=400, deadline=None)
@given(small_histories(), st.booleans())
def test_agrees_with_brute_force(h, relaxed):
    assert h.is_well_formed()
    v = check_linearizable(h, relaxed=relaxed)
    assert v.linearizable == brute_force_linearizable(h, relaxed=relaxed)
    if v.linearizable:
        assert replay_order(h, [op.id for op in v.witness], relaxed=relaxed)
