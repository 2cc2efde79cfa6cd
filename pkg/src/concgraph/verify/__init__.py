from .audit import audit_acyclicity, audit_structure
from .checker import (
    Verdict,
    brute_force_linearizable,
    check_linearizable,
    complete_history,
    replay_order,
)
from .history import History, HistoryEvent, Operation, Recorder, RecorderOverflow
from .scenarios import Scenario, catalog, false_positive_race, run_scenario
from .schedule import PauseController, ScheduleError, ScheduleTimeout, ScriptedSchedule, Step
from .workloads import HistoryConfig, Program, random_histories, random_program, record

__all__ = [
    "History",
    "HistoryConfig",
    "HistoryEvent",
    "Operation",
    "PauseController",
    "Program",
    "Recorder",
    "RecorderOverflow",
    "Scenario",
    "ScheduleError",
    "ScheduleTimeout",
    "ScriptedSchedule",
    "Step",
    "Verdict",
    "audit_acyclicity",
    "audit_structure",
    "brute_force_linearizable",
    "catalog",
    "check_linearizable",
    "complete_history",
    "false_positive_race",
    "random_histories",
    "random_program",
    "record",
    "replay_order",
    "run_scenario",
]
