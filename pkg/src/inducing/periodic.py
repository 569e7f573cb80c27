"""
주기점: 텐트 T^k 의 2^k 개 affine 조각에서 고정점을 정확히 풀고 chart 로 옮긴다.

itinerary s_0 … s_{k-1} 에 대해 T^k(y) = a·y + b (정수 a = ±2^k, b 정수).
s = 0: (a, b) ← (2a, 2b),  s = 1: (a, b) ← (-2a, 2 - 2b)
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..calculus import log_deriv_iterate
from ..common.errors import CuspLabError, PreconditionError
from ..maps import PiecewiseMap

logger = logging.getLogger(__name__)

MAX_PERIOD = 24
MERGE_TOL = 1e-12


def tent_periodic_points(k: int) -> np.ndarray:
    """T^k(y) = y 의 해 (오름차순, 1e-12 이내 중복 병합)"""
    if not (1 <= k <= MAX_PERIOD):
        raise PreconditionError(f"주기 k 는 1..{MAX_PERIOD} 이어야 함 (got {k})")
    a = np.ones(1, dtype=np.int64)
    b = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        a = np.concatenate([2 * a, -2 * a])
        b = np.concatenate([2 * b, 2 - 2 * b])
    # 각 원통은 T^k 로 [0, 1] 전체에 올라가므로 모든 조각이 해를 하나씩 갖는다
    fixed = np.sort(b / (1.0 - a) + 0.0)
    keep = np.concatenate([[True], np.diff(fixed) > MERGE_TOL])
    return fixed[keep]


def periodic_points(fmap: PiecewiseMap, k: int) -> np.ndarray:
    """텐트와 켤레인 사상의 주기 k 점 (주기의 약수 포함): ambient 좌표"""
    if fmap.chart is None:
        raise PreconditionError(f"{fmap.name}: 텐트 켤레가 아닌 사상의 주기점 열거는 지원하지 않음")
    tent_points = tent_periodic_points(k)
    interior = tent_points[(tent_points > 0.0) & (tent_points < 1.0)]
    mapped = np.asarray(fmap.chart.to_ambient(interior), dtype=float) if interior.size else interior
    out = np.concatenate([tent_points[tent_points == 0.0], mapped, tent_points[tent_points == 1.0]])
    logger.debug(f"periodic_points({fmap.name}, k={k}): {out.size} 점")
    return out


@dataclass(frozen=True)
class PeriodicDerivativeCheck:
    period: int
    checked: int
    skipped: int
    max_relative_error: float


def periodic_derivative_check(fmap: PiecewiseMap, k: int) -> PeriodicDerivativeCheck:
    """|Df^k(p)| = 2^k 의 최대 상대오차. 궤도가 분기 경계를 지나는 점은 건너뛴다."""
    target = k * np.log(2.0)
    errors: List[float] = []
    skipped = 0
    for p in periodic_points(fmap, k):
        if not fmap.ambient.contains(float(p)):
            skipped += 1
            continue
        try:
            total = log_deriv_iterate(fmap, float(p), k)
        except CuspLabError:
            skipped += 1
            continue
        errors.append(abs(np.expm1(total - target)))
    worst = float(max(errors)) if errors else 0.0
    return PeriodicDerivativeCheck(k, len(errors), skipped, worst)
