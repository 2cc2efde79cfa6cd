"""Deterministic interleavings through the graphs' pause points.

The graphs call ``graph.hook(point)`` at fixed places (after a traversal,
while holding locks, after a logical mark, ...). :class:`PauseController`
installs itself as that hook and parks a controlled thread when it reaches
the point it was told to run to. :class:`ScriptedSchedule` drives a list of
such steps.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field


class ScheduleError(RuntimeError):
    pass


class ScheduleTimeout(ScheduleError):
    pass


@dataclass
class _Thread:
    name: str
    fn: object
    thread: threading.Thread | None = None
    go: bool = False
    target: tuple[str, int] | None = None
    hits: int = 0
    parked_at: str | None = None
    done: bool = False
    result: object = None
    error: BaseException | None = None


class PauseController:
    """Graph hook that parks named threads at named pause points."""

    def __init__(self, timeout: float = 5.0):
        self.timeout = timeout
        self._cond = threading.Condition()
        self._threads: dict[str, _Thread] = {}
        self._by_ident: dict[str, _Thread] = {}

    def __call__(self, point: str) -> None:
        st = self._by_ident.get(threading.current_thread().name)
        if st is None or st.target is None:
            return
        with self._cond:
            want, nth = st.target
            if point != want:
                return
            st.hits += 1
            if st.hits < nth:
                return
            st.target = None
            st.go = False
            st.parked_at = point
            self._cond.notify_all()
            while not st.go:
                self._cond.wait()
            st.parked_at = None

    def spawn(self, name: str, fn) -> None:
        """Create thread ``name``; it stays parked until first resumed."""
        if name in self._threads:
            raise ScheduleError(f"duplicate thread {name!r}")
        st = _Thread(name, fn)
        ident = f"{name}#{id(self):x}"

        def body():
            with self._cond:
                while not st.go:
                    self._cond.wait()
            try:
                st.result = fn()
            except BaseException as exc:  # surfaced via result()
                st.error = exc
            with self._cond:
                st.done = True
                self._cond.notify_all()

        st.thread = threading.Thread(target=body, name=ident, daemon=True)
        self._threads[name] = st
        self._by_ident[ident] = st
        st.thread.start()

    def _resume(self, st: _Thread, target) -> None:
        if st.done:
            raise ScheduleError(f"{st.name} already finished")
        st.target = target
        st.hits = 0
        st.go = True
        self._cond.notify_all()

    def run_until(self, name: str, point: str, nth: int = 1) -> None:
        """Resume ``name`` until its ``nth`` hit of ``point``; it then stays parked."""
        st = self._threads[name]
        with self._cond:
            self._resume(st, (point, nth))
            ok = self._cond.wait_for(lambda: st.parked_at == point or st.done, self.timeout)
            if not ok:
                raise ScheduleTimeout(f"{name} did not reach {point} within {self.timeout}s")
            if st.parked_at != point:
                raise ScheduleError(f"{name} finished without reaching {point}")

    def run_to_end(self, name: str) -> object:
        st = self._threads[name]
        with self._cond:
            self._resume(st, None)
            if not self._cond.wait_for(lambda: st.done, self.timeout):
                raise ScheduleTimeout(f"{name} did not finish within {self.timeout}s")
        return self.result(name)

    def release(self, name: str) -> None:
        """Resume ``name`` to completion without waiting for it."""
        with self._cond:
            self._resume(self._threads[name], None)

    def wait_done(self, name: str, timeout: float | None = None) -> bool:
        st = self._threads[name]
        with self._cond:
            return self._cond.wait_for(lambda: st.done, self.timeout if timeout is None else timeout)

    def is_done(self, name: str) -> bool:
        return self._threads[name].done

    def parked_at(self, name: str) -> str | None:
        return self._threads[name].parked_at

    def result(self, name: str):
        st = self._threads[name]
        if st.error is not None:
            raise st.error
        return st.result

    def finish_all(self) -> None:
        for name, st in self._threads.items():
            if not st.done:
                if st.go and st.parked_at is None:
                    self.wait_done(name)
                else:
                    self.run_to_end(name)


@dataclass
class Step:
    thread: str
    point: str | None = None  # None: run to completion
    nth: int = 1
    wait: bool = True


@dataclass
class ScriptedSchedule:
    """An ordered list of ``(thread, pause point)`` directives.

    Every thread is parked before its program starts. Each step resumes one
    thread until it reaches the named point (or finishes, when ``point`` is
    None). Steps given as tuples are ``(thread, point[, nth])``.
    """

    steps: list = field(default_factory=list)
    timeout: float = 5.0

    def _steps(self):
        for s in self.steps:
            yield s if isinstance(s, Step) else Step(*s)

    def run(self, graph, programs: dict) -> dict:
        ctl = PauseController(self.timeout)
        prev = graph.hook
        graph.hook = ctl
        try:
            for name, fn in programs.items():
                ctl.spawn(name, fn)
            for s in self._steps():
                if s.point is None:
                    if s.wait:
                        ctl.run_to_end(s.thread)
                    else:
                        ctl.release(s.thread)
                else:
                    ctl.run_until(s.thread, s.point, s.nth)
            ctl.finish_all()
            return {name: ctl.result(name) for name in programs}
        finally:
            graph.hook = prev
