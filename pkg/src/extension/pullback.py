"""
구간 pullback: 역궤도를 따라 V = B(y_0, r) 을 끌어당기며 길이와 왜곡 누적합을 기록.

분기 경계를 넘으면 반경을 반으로 줄이고 처음부터 다시 한다. distortion_budget 을 주면
왜곡 누적합이 그 값에 닿을 때도 줄인다 (경험적 α(y)). 예산을 주지 않았을 때는
누적합이 log 2 에 처음 닿은 스텝을 budget_overrun_at 으로 보고만 한다.

chart 가 있는 사상은 텐트 좌표에서 끌어당긴다: 분기가 full 이라 경계를 넘을 수 없고,
offset 은 정확히 반으로 준다. log|Df| 는 chart 로 log 2 + J(Tu) - J(u).
구간 폭이 가장자리 거리의 1e-6 배 아래로 내려가면 선형 근사 (J 의 기울기) 로 바꾼다.
chart 가 없는 사상은 앰비언트에서 끝점 역상을 구한다.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import linregress

from ..common.errors import DegenerateFiberError, PreconditionError
from ..common.utils import chebyshev_points
from ..maps import Branch, OpenInterval, PiecewiseMap
from .backward import BackwardOrbit

logger = logging.getLogger(__name__)

DISTORTION_BUDGET = math.log(2.0)
MIN_RADIUS = 1e-12
LINEAR_REGIME = 1e-6
SUP_NODES = 17


@dataclass(frozen=True)
class PullbackTrace:
    centers: np.ndarray  # y_0 … y_n
    lo_offsets: np.ndarray
    hi_offsets: np.ndarray
    lengths: np.ndarray
    distortion_partial_sums: np.ndarray
    radius: float  # 최종 허용 반경 (경험적 α(y))
    shrink_events: int
    slope: float  # log 길이의 최소제곱 기울기
    requested_radius: float = math.nan
    budget_shrinks: int = 0
    budget_overrun_at: Optional[int] = None  # 누적합이 log 2 에 처음 닿은 스텝

    @property
    def intervals(self) -> List[Tuple[float, float]]:
        return [
            (float(c + lo), float(c + hi))
            for c, lo, hi in zip(self.centers, self.lo_offsets, self.hi_offsets)
        ]

    @property
    def within_budget(self) -> bool:
        return self.budget_overrun_at is None


class _Crossing(Exception):
    """현재 반경으로는 분기 경계를 넘음"""


class _OverBudget(Exception):
    """왜곡 누적합이 요청한 예산에 닿음"""


def _check_budget(sums: np.ndarray, i: int, budget: Optional[float]) -> None:
    if budget is not None and sums[i] >= budget:
        raise _OverBudget(f"step {i}: 왜곡 누적합 {sums[i]:.4f} ≥ {budget:.4f}")


# ─── 앰비언트 경로 (chart 없음) ───

def _log_deriv_slope(branch: Branch, y: float) -> float:
    h = max(abs(y), 1e-300) * 1e-6
    if not (branch.domain.contains(y - h) and branch.domain.contains(y + h)):
        return 0.0
    upper = float(branch.log_abs_deriv(y + h))
    lower = float(branch.log_abs_deriv(y - h))
    return (upper - lower) / (2.0 * h)


def _distortion_term(branch: Branch, y: float, lo: float, hi: float, linear: bool) -> float:
    """V_i 위에서 sup |log|Df(x')| - log|Df(y_i)||"""
    if linear:
        return abs(_log_deriv_slope(branch, y)) * max(abs(lo), abs(hi))
    nodes = chebyshev_points(y + lo, y + hi, SUP_NODES)
    with np.errstate(all="ignore"):
        values = np.asarray(branch.log_abs_deriv(nodes), dtype=float)
    centre = float(branch.log_abs_deriv(y))
    return float(np.max(np.abs(values - centre)))


def _attempt(fmap: PiecewiseMap, orbit: BackwardOrbit, radius: float, budget: Optional[float]):
    ys = orbit.points
    n = orbit.length
    lo_off = np.empty(n + 1)
    hi_off = np.empty(n + 1)
    sums = np.zeros(n + 1)
    lo_off[0], hi_off[0] = -radius, radius
    linear = False
    for i in range(n):
        branch = fmap.branches[orbit.branch_indices[i]]
        y, y_next = ys[i], ys[i + 1]
        a, b = y + lo_off[i], y + hi_off[i]
        if not (branch.image.lo < a and b < branch.image.hi):
            raise _Crossing(f"step {i}: V 가 분기 상을 벗어남")
        if not linear and (b - a) < LINEAR_REGIME * max(abs(y), 1e-300):
            linear = True
        if linear:
            d = float(branch.deriv(y_next))
            if not (math.isfinite(d) and d != 0.0):
                raise _Crossing(f"step {i}: 미분이 비유한")
            u, v = lo_off[i] / d, hi_off[i] / d
        else:
            u = fmap.pullback(int(orbit.branch_indices[i]), a) - y_next
            v = fmap.pullback(int(orbit.branch_indices[i]), b) - y_next
        lo_off[i + 1], hi_off[i + 1] = min(u, v), max(u, v)
        if not (lo_off[i + 1] < 0.0 < hi_off[i + 1]) and not linear:
            raise _Crossing(f"step {i}: 역상이 y_{i + 1} 을 포함하지 않음")
        term = _distortion_term(branch, y_next, lo_off[i + 1], hi_off[i + 1], linear)
        sums[i + 1] = sums[i] + term
        _check_budget(sums, i + 1, budget)
    return lo_off, hi_off, sums


# ─── 텐트 좌표 경로 (chart 보유) ───

def _edge_distance(u: float) -> float:
    return min(u, 1.0 - u)


def _tent_image(u, symbol: int):
    return 2.0 * u if symbol == 0 else 2.0 - 2.0 * u


def _is_linear(u: float, symbol: int, width: float) -> bool:
    scale = min(_edge_distance(u), 0.5 * _edge_distance(float(_tent_image(u, symbol))))
    return width < LINEAR_REGIME * scale


def _chart_distortion_term(fmap: PiecewiseMap, u: float, symbol: int, lo: float, hi: float) -> float:
    """텐트 좌표 V 위에서 sup |Φ(u') - Φ(u)|, Φ(u) = J(Tu) - J(u)"""
    chart = fmap.chart
    if chart.is_identity:
        return 0.0
    with np.errstate(all="ignore"):
        if _is_linear(u, symbol, hi - lo):
            sign = 1.0 if symbol == 0 else -1.0
            slope = 2.0 * sign * float(chart.log_jacobian_slope(_tent_image(u, symbol))) - float(
                chart.log_jacobian_slope(u)
            )
            return abs(slope) * max(abs(lo), abs(hi))
        nodes = chebyshev_points(u + lo, u + hi, SUP_NODES)
        phi = np.asarray(chart.log_jacobian(_tent_image(nodes, symbol)), dtype=float) - np.asarray(
            chart.log_jacobian(nodes), dtype=float
        )
        centre = float(chart.log_jacobian(_tent_image(u, symbol))) - float(chart.log_jacobian(u))
    return float(np.max(np.abs(phi - centre)))


def _ambient_offsets(fmap: PiecewiseMap, us: np.ndarray, t_lo: np.ndarray, t_hi: np.ndarray):
    """텐트 offset → 앰비언트 offset (선형 영역에서는 exp(J(u))·offset)"""
    chart = fmap.chart
    if chart.is_identity:
        return t_lo.copy(), t_hi.copy()
    lo = np.empty_like(t_lo)
    hi = np.empty_like(t_hi)
    for i, u in enumerate(us):
        if t_hi[i] - t_lo[i] < LINEAR_REGIME * _edge_distance(float(u)):
            scale = math.exp(float(chart.log_jacobian(float(u))))
            lo[i], hi[i] = scale * t_lo[i], scale * t_hi[i]
        else:
            x = float(chart.to_ambient(float(u)))
            lo[i] = float(chart.to_ambient(float(u + t_lo[i]))) - x
            hi[i] = float(chart.to_ambient(float(u + t_hi[i]))) - x
    return lo, hi


def _attempt_chart(fmap: PiecewiseMap, orbit: BackwardOrbit, radius: float, budget: Optional[float]):
    chart = fmap.chart
    ys = orbit.points
    n = orbit.length
    us = np.asarray(chart.from_ambient(ys), dtype=float)
    t_lo = np.empty(n + 1)
    t_hi = np.empty(n + 1)
    sums = np.zeros(n + 1)
    if chart.is_identity:
        t_lo[0], t_hi[0] = -radius, radius
    else:
        y0 = float(ys[0])
        t_lo[0] = float(chart.from_ambient(y0 - radius)) - us[0]
        t_hi[0] = float(chart.from_ambient(y0 + radius)) - us[0]
    symbols = orbit.branch_indices
    for i in range(n):
        s = int(symbols[i])
        if s == 0:
            t_lo[i + 1], t_hi[i + 1] = 0.5 * t_lo[i], 0.5 * t_hi[i]
        else:
            t_lo[i + 1], t_hi[i + 1] = -0.5 * t_hi[i], -0.5 * t_lo[i]
        term = _chart_distortion_term(fmap, float(us[i + 1]), s, t_lo[i + 1], t_hi[i + 1])
        sums[i + 1] = sums[i] + term
        _check_budget(sums, i + 1, budget)
    lo_off, hi_off = _ambient_offsets(fmap, us, t_lo, t_hi)
    return lo_off, hi_off, sums


# ─── 공개 API ───

def pullback_interval(
    fmap: PiecewiseMap,
    orbit: BackwardOrbit,
    radius: Optional[float] = None,
    V: Optional[OpenInterval] = None,
    distortion_budget: Optional[float] = None,
) -> PullbackTrace:
    """V = B(y_0, radius) 를 기록된 분기를 따라 끌어당긴다.

    distortion_budget 이 None 이면 분기 경계를 넘을 때만 반경을 줄인다.
    """
    y0 = float(orbit.points[0])
    if V is not None:
        if not V.contains(y0):
            raise PreconditionError("V 는 y_0 를 포함해야 함")
        radius = min(y0 - V.lo, V.hi - y0)
    if radius is None or radius <= 0:
        raise PreconditionError("pullback 반경은 양수여야 함")
    if not fmap.ambient.contains_interval(OpenInterval(y0 - radius, y0 + radius)):
        raise PreconditionError(f"V = B({y0}, {radius}) 가 ambient 밖으로 나감")
    if distortion_budget is not None and not distortion_budget > 0:
        raise PreconditionError(f"distortion_budget 은 양수여야 함 (got {distortion_budget})")

    attempt = _attempt_chart if fmap.chart is not None else _attempt
    requested = float(radius)
    shrink_events = 0
    budget_shrinks = 0
    while True:
        try:
            lo_off, hi_off, sums = attempt(fmap, orbit, radius, distortion_budget)
            break
        except (_Crossing, _OverBudget) as exc:
            shrink_events += 1
            if isinstance(exc, _OverBudget):
                budget_shrinks += 1
            radius *= 0.5
            logger.debug(f"pullback 반경 축소 → {radius:.3g} ({exc})")
            if radius < MIN_RADIUS:
                raise DegenerateFiberError(
                    f"{fmap.name}: pullback 반경이 {MIN_RADIUS:g} 아래로 축소됨",
                    radius=radius,
                    shrink_events=shrink_events,
                )
    if shrink_events:
        logger.warning(
            f"{fmap.name}: pullback 반경 {shrink_events}회 축소 "
            f"(예산 {budget_shrinks}회, 최종 {radius:.3g})"
        )

    over = np.flatnonzero(sums >= DISTORTION_BUDGET)
    overrun_at = int(over[0]) if over.size else None
    if overrun_at is not None:
        logger.info(f"{fmap.name}: 왜곡 누적합이 step {overrun_at} 에서 log 2 에 닿음 (반경 {radius:.3g})")

    lengths = hi_off - lo_off
    steps = np.arange(lengths.size)
    with np.errstate(divide="ignore"):
        log_lengths = np.log(lengths)
    slope = float(linregress(steps, log_lengths).slope) if lengths.size > 1 else math.nan
    return PullbackTrace(
        centers=orbit.points.copy(),
        lo_offsets=lo_off,
        hi_offsets=hi_off,
        lengths=lengths,
        distortion_partial_sums=sums,
        radius=float(radius),
        shrink_events=shrink_events,
        slope=slope,
        requested_radius=requested,
        budget_shrinks=budget_shrinks,
        budget_overrun_at=overrun_at,
    )
