"""
궤도 생성

텐트와 켤레인 사상(chart 보유)은 텐트 좌표에서 반복한다. 부동소수 텐트 궤도는
~55 스텝 안에 0 으로 붕괴한다 (접을 때마다 하위 비트가 사라짐). 매 스텝 결과를
시드 고정 난수 방향으로 1 ulp 밀어(nextafter) 가수의 하위 비트를 계속 채운다.
앰비언트 점과 log|Df| 는 chart 로 복원한다. chart 가 없는 사상은 직접 반복한다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..common.errors import OrbitBreakError
from ..common.utils import make_rng
from .base import PiecewiseMap

logger = logging.getLogger(__name__)


@dataclass
class Orbit:
    """x_0 … x_{m-1} 와 각 점의 log|Df|, 분기 번호. 끊기면 broken_at = m."""

    points: np.ndarray
    log_derivs: np.ndarray
    branch_ids: np.ndarray
    broken_at: Optional[int] = None
    tent_coords: Optional[np.ndarray] = None

    @property
    def length(self) -> int:
        return int(self.points.shape[0])

    @property
    def complete(self) -> bool:
        return self.broken_at is None


def _nudge(t: float, toward: float) -> float:
    """t 를 toward 쪽으로 1 ulp. 결과가 (0, 1) 밖이면 반대쪽으로."""
    y = math.nextafter(t, toward)
    if not (0.0 < y < 1.0):
        y = math.nextafter(t, 1.0 - toward)
    return y


def _tent_coordinate_orbit(fmap: PiecewiseMap, x0: float, n: int, rng: np.random.Generator):
    chart = fmap.chart
    y = float(chart.from_ambient(x0))
    toward = np.where(rng.integers(0, 2, n) == 1, 1.0, 0.0)
    ys = np.empty(n)
    tys = np.empty(n)
    m = n
    for i in range(n):
        if not (0.0 < y < 1.0) or y == 0.5:
            m = i
            break
        t = 2.0 * y if y < 0.5 else 2.0 - 2.0 * y
        ys[i] = y
        tys[i] = t
        y = _nudge(t, toward[i])
    ys, tys = ys[:m], tys[:m]
    with np.errstate(all="ignore"):
        log_derivs = np.asarray(chart.log_abs_deriv_via_chart(ys, tys), dtype=float)
    bad = np.flatnonzero(~np.isfinite(log_derivs))
    if bad.size:
        m = int(bad[0])
        ys, tys, log_derivs = ys[:m], tys[:m], log_derivs[:m]
    points = np.asarray(chart.to_ambient(ys), dtype=float) if m else np.empty(0)
    branch_ids = (ys > 0.5).astype(np.int64)
    return points, log_derivs, branch_ids, ys, m


def _direct_orbit(fmap: PiecewiseMap, x0: float, n: int):
    xs = np.empty(n)
    ids = np.empty(n, dtype=np.int64)
    x = float(x0)
    m = n
    for i in range(n):
        idx = fmap.find_branch(x)
        if idx is None:
            m = i
            break
        xs[i] = x
        ids[i] = idx
        x = float(fmap.branches[idx].value(x))
    xs, ids = xs[:m], ids[:m]
    log_derivs = np.empty(m)
    for idx, branch in enumerate(fmap.branches):
        mask = ids == idx
        if np.any(mask):
            with np.errstate(all="ignore"):
                log_derivs[mask] = branch.log_abs_deriv(xs[mask])
    bad = np.flatnonzero(~np.isfinite(log_derivs))
    if bad.size:
        m = int(bad[0])
        xs, ids, log_derivs = xs[:m], ids[:m], log_derivs[:m]
    return xs, log_derivs, ids, m


def generate_orbit(
    fmap: PiecewiseMap,
    x0: float,
    n: int,
    seed: int = 0,
    strict: bool = False,
) -> Orbit:
    """길이 n 궤도. strict 이면 끊기는 즉시 OrbitBreakError(index)"""
    if fmap.chart is not None:
        points, log_derivs, ids, tent_coords, m = _tent_coordinate_orbit(fmap, x0, n, make_rng(seed))
    else:
        points, log_derivs, ids, m = _direct_orbit(fmap, x0, n)
        tent_coords = None

    broken_at = m if m < n else None
    if broken_at is not None:
        if strict:
            raise OrbitBreakError(
                f"{fmap.name}: 궤도가 index {broken_at} 에서 끊김", index=broken_at
            )
        logger.warning(f"{fmap.name}: 궤도가 index {broken_at}/{n} 에서 끊김 (x0={x0!r})")
    return Orbit(points, log_derivs, ids, broken_at, tent_coords)


def iterate(fmap: PiecewiseMap, x: float, n: int) -> float:
    """앰비언트 좌표에서 f^n(x) (짧은 반복용)"""
    for i in range(n):
        idx = fmap.find_branch(x)
        if idx is None:
            raise OrbitBreakError(f"{fmap.name}: f^{i}(x) = {x!r} 정의되지 않음", index=i, point=x)
        x = float(fmap.branches[idx].value(x))
        if not math.isfinite(x):
            raise OrbitBreakError(f"{fmap.name}: 비유한 값", index=i + 1)
    return x
