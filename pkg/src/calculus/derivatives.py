"""
반복 도함수와 C^r 조건
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.special import comb

from ..common.errors import OrbitBreakError
from ..maps import PiecewiseMap

logger = logging.getLogger(__name__)


def log_deriv_iterate(fmap: PiecewiseMap, x: float, n: int) -> float:
    """Σ_{i<n} log|Df(f^i x)| (math.fsum 보정합)"""
    terms = []
    for i in range(n):
        idx = fmap.find_branch(x)
        if idx is None:
            raise OrbitBreakError(f"{fmap.name}: f^{i}(x) = {x!r} 에서 궤도가 끊김", index=i, point=x)
        branch = fmap.branches[idx]
        logd = float(branch.log_abs_deriv(x))
        if not math.isfinite(logd):
            raise OrbitBreakError(f"{fmap.name}: index {i} 에서 log|Df| 비유한", index=i, point=x)
        terms.append(logd)
        x = float(branch.value(x))
    return math.fsum(terms)


# ─── 유한차분 ───

def _central_difference(fn: Callable, x: float, h: float, order: int) -> float:
    """order 계 중심차분: 오프셋 (order/2 - j)·h, 오차 O(h²)"""
    j = np.arange(order + 1)
    weights = (-1.0) ** j * comb(order, j)
    points = x + (order / 2.0 - j) * h
    return float(np.dot(weights, np.asarray(fn(points), dtype=float)) / h ** order)


def richardson_derivative(fn: Callable, x: float, h: float, order: int) -> float:
    """Richardson 외삽: (4·D(h/2) - D(h)) / 3"""
    coarse = _central_difference(fn, x, h, order)
    fine = _central_difference(fn, x, h / 2.0, order)
    return (4.0 * fine - coarse) / 3.0


def fd_step(x: float) -> float:
    return max(1e-6, 1e-4 * abs(x))


@dataclass(frozen=True)
class CrReport:
    passed: bool
    r: int
    p: float
    constant: float
    max_small: float
    max_large: float
    checked: int
    skipped: int
    worst_point: Optional[float] = None


def cr_ratio_check(
    fmap: PiecewiseMap,
    r: int,
    p: float,
    C: float,
    grid: Iterable[float],
) -> CrReport:
    """2 ≤ i ≤ r 에 대해 |Df| ≤ 2 이면 |D^i f| < C, |Df| ≥ 2 이면 |D^i f| / |Df|^p < C.

    D^i f 는 닫힌꼴 Df 의 (i-1) 계 유한차분. 스텐실이 분기 밖으로 나가면 건너뛴다.
    """
    max_small = max_large = 0.0
    worst_point = None
    checked = skipped = 0
    for x in grid:
        x = float(x)
        idx = fmap.find_branch(x)
        if idx is None:
            skipped += 1
            continue
        branch = fmap.branches[idx]
        logd = float(branch.log_abs_deriv(x))
        h = fd_step(x)
        reach = (r - 1) / 2.0 * h
        if not (math.isfinite(logd) and branch.domain.contains(x - reach) and branch.domain.contains(x + reach)):
            skipped += 1
            continue
        d1 = math.exp(logd)
        with np.errstate(all="ignore"):
            higher = [abs(richardson_derivative(branch.deriv, x, h, i - 1)) for i in range(2, r + 1)]
        if not all(math.isfinite(v) for v in higher):
            skipped += 1
            continue
        checked += 1
        top = max(higher)
        if d1 <= 2.0 and top > max_small:
            max_small, worst_point = top, x
        if d1 >= 2.0:
            ratio = top / d1 ** p
            if ratio > max_large:
                max_large, worst_point = ratio, x
    passed = max_small < C and max_large < C
    if skipped:
        logger.debug(f"cr_ratio_check({fmap.name}): {skipped} 점 건너뜀")
    return CrReport(passed, r, p, C, max_small, max_large, checked, skipped, worst_point)
