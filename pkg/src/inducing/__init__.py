"""
유도 Markov 사상: nice 구간, 주기점, 유도 사상 구성, 전달 연산자
"""

from .builder import (
    InducedBranch,
    InducedHolderReport,
    InducedMarkovMap,
    LevelStats,
    MarkovStats,
    build_induced,
    markov_stats,
    nested_or_disjoint,
    pull_interval,
)
from .oracle import brute_force_first_returns
from .periodic import PeriodicDerivativeCheck, periodic_derivative_check, periodic_points, tent_periodic_points
from .returning import ReturnCheck, ReturnVerdict, is_regularly_returning
from .transfer import (
    TransferResult,
    ambient_transfer_step,
    spread_measure,
    transfer_density,
    transfer_invariance_error,
    ulam_matrix,
)

__all__ = [
    "InducedBranch",
    "InducedHolderReport",
    "InducedMarkovMap",
    "LevelStats",
    "MarkovStats",
    "PeriodicDerivativeCheck",
    "ReturnCheck",
    "ReturnVerdict",
    "TransferResult",
    "ambient_transfer_step",
    "brute_force_first_returns",
    "build_induced",
    "is_regularly_returning",
    "markov_stats",
    "nested_or_disjoint",
    "periodic_derivative_check",
    "periodic_points",
    "pull_interval",
    "spread_measure",
    "tent_periodic_points",
    "transfer_density",
    "transfer_invariance_error",
    "ulam_matrix",
]
