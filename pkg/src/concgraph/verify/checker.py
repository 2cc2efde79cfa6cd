"""Brute-force linearizability checking against the sequential graph.

The search is Wing & Gong style: repeatedly pick an operation that no
remaining operation precedes in real time, replay it on the sequential model,
and backtrack on a return-value mismatch. ``(remaining ops, model state)``
pairs already shown to fail are memoized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from ..baselines import SequentialGraph
from .history import History, Operation

READ_ONLY = frozenset({"contains_vertex", "contains_edge", "path_exists"})
OPS = frozenset({"add_vertex", "remove_vertex", "add_edge", "remove_edge"}) | READ_ONLY


def base_op(name: str) -> str:
    return name[len("acyclic_"):] if name.startswith("acyclic_") else name


def legal_returns(op: str) -> tuple[bool, ...]:
    """Every return value the sequential specification can produce for ``op``."""
    name = base_op(op)
    if name not in OPS:
        raise ValueError(f"unknown operation {op!r}")
    return (True,) if name == "add_vertex" else (True, False)


def step(state: SequentialGraph, op: str, args, ret, relaxed: bool = False):
    """Apply ``op`` to a copy of ``state``; None if it cannot return ``ret``.

    With ``relaxed`` an acyclic ``add_edge`` may also fail on a fresh edge
    between live vertices, leaving the state unchanged (a false positive).
    """
    name = base_op(op)
    if name in READ_ONLY:
        return state if getattr(state, name)(*args) == ret else None
    nxt = state.copy()
    if getattr(nxt, name)(*args) == ret:
        return nxt
    if (
        relaxed
        and state.acyclic
        and name == "add_edge"
        and ret is False
        and not state.contains_edge(*args)
    ):
        return state
    return None


def complete_history(h: History) -> list[list[Operation]]:
    """Candidate completions: each pending op is dropped or given each legal return."""
    ops = h.operations()
    done = [op for op in ops if not op.pending]
    pending = [op for op in ops if op.pending]
    choices = [[None] + [replace(op, ret=r) for r in legal_returns(op.op)] for op in pending]
    out = []
    for combo in itertools.product(*choices):
        cand = done + [op for op in combo if op is not None]
        cand.sort(key=lambda o: o.id)
        out.append(cand)
    return out


@dataclass
class Verdict:
    """``linearizable`` is None when the search budget ran out."""

    linearizable: bool | None
    witness: list[Operation] | None = None
    explored: int = 0
    relaxed_needed: bool = False

    @property
    def inconclusive(self) -> bool:
        return self.linearizable is None

    def __str__(self):
        if self.linearizable is None:
            return f"inconclusive after {self.explored} states"
        if not self.linearizable:
            return f"NOT linearizable ({self.explored} states)"
        order = " < ".join(op.label() for op in self.witness or [])
        return f"linearizable: {order}"


class _Budget(Exception):
    pass


def _search(ops: list[Operation], init: SequentialGraph, relaxed: bool, budget: int, counter):
    n = len(ops)
    failed: set = set()
    order: list[int] = []

    def rec(remaining: frozenset, state: SequentialGraph) -> bool:
        if not remaining:
            return True
        key = (remaining, state.freeze())
        if key in failed:
            return False
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget
        min_resp = min(ops[i].resp for i in remaining)
        for i in sorted(remaining, key=lambda j: ops[j].inv):
            op = ops[i]
            if op.inv > min_resp:
                break
            nxt = step(state, op.op, op.args, op.ret, relaxed)
            if nxt is None:
                continue
            order.append(i)
            if rec(remaining - {i}, nxt):
                return True
            order.pop()
        failed.add(key)
        return False

    if rec(frozenset(range(n)), init):
        return [ops[i] for i in order]
    return None


def check_linearizable(
    h: History,
    model: str | None = None,
    relaxed: bool | None = None,
    budget: int = 500_000,
) -> Verdict:
    """Search for a legal sequential witness of ``h``.

    ``model`` is ``"plain"`` or ``"acyclic"`` (inferred from op names by
    default). For the acyclic model the strict specification is tried
    first; unless ``relaxed`` is False, false-positive aborts are then
    admitted and ``relaxed_needed`` reports whether that was required.
    """
    model = model or h.infer_model()
    acyclic = model == "acyclic"
    modes = [False]
    if acyclic and relaxed is not False:
        modes.append(True)
    if relaxed and acyclic:
        modes = [True]
    counter = [0]
    verts, edges = h.initial
    init = SequentialGraph.from_snapshot(verts, edges, acyclic=acyclic)
    try:
        for mode in modes:
            for cand in complete_history(h):
                witness = _search(cand, init, mode, budget, counter)
                if witness is not None:
                    return Verdict(True, witness, counter[0], relaxed_needed=mode)
    except _Budget:
        return Verdict(None, None, counter[0])
    return Verdict(False, None, counter[0])


def respects_real_time(order: list[Operation]) -> bool:
    for a_idx, a in enumerate(order):
        for b in order[a_idx + 1:]:
            if b.resp < a.inv:
                return False
    return True


def replay_order(
    h: History, order, model: str | None = None, relaxed: bool = False, by: str = "id"
) -> bool:
    """Is this specific total order a legal witness for the completed history?

    ``order`` lists operation ids, or thread numbers with ``by="thread"``
    when every thread ran exactly one operation.
    """
    ops = h.operations()
    if any(op.pending for op in ops):
        raise ValueError("replay_order needs a complete history")
    if by == "thread":
        index = {op.thread: op for op in ops}
        if len(index) != len(ops):
            raise ValueError("by='thread' needs one operation per thread")
    else:
        index = dict(enumerate(ops))
    seq = [index[x] for x in order]
    if sorted(op.id for op in seq) != list(range(len(ops))):
        raise ValueError("order must mention every operation exactly once")
    if not respects_real_time(seq):
        return False
    model = model or h.infer_model()
    verts, edges = h.initial
    state = SequentialGraph.from_snapshot(verts, edges, acyclic=model == "acyclic")
    for op in seq:
        state = step(state, op.op, op.args, op.ret, relaxed)
        if state is None:
            return False
    return True


def brute_force_linearizable(h: History, model: str | None = None, relaxed: bool = False) -> bool:
    """Reference check by enumerating every permutation. Tiny histories only."""
    model = model or h.infer_model()
    verts, edges = h.initial
    for cand in complete_history(h):
        if len(cand) > 9:
            raise ValueError("too many operations for permutation enumeration")
        for perm in itertools.permutations(cand):
            if not respects_real_time(list(perm)):
                continue
            state = SequentialGraph.from_snapshot(verts, edges, acyclic=model == "acyclic")
            for op in perm:
                state = step(state, op.op, op.args, op.ret, relaxed)
                if state is None:
                    break
            else:
                return True
    return False


__all__ = [
    "Verdict",
    "brute_force_linearizable",
    "check_linearizable",
    "complete_history",
    "legal_returns",
    "replay_order",
    "respects_real_time",
    "step",
]
