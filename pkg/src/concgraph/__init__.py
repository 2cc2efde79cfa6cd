from .acyclic import AcyclicGraph, EdgeStatus
from .baselines import CoarseLockGraph, SequentialGraph, bfs_path_exists, oracle_cycle_check
from .core import SENTINEL_MAX, SENTINEL_MIN, ConcurrentGraph, KeyDomainError

__all__ = [
    "AcyclicGraph",
    "CoarseLockGraph",
    "ConcurrentGraph",
    "EdgeStatus",
    "KeyDomainError",
    "SENTINEL_MAX",
    "SENTINEL_MIN",
    "SequentialGraph",
    "bfs_path_exists",
    "oracle_cycle_check",
]
