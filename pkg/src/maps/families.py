"""
사상 패밀리: tent, g_α = h∘T∘h^{-1}, f_α = h^{-1}∘T∘h, Chebyshev 4x(1-x), g_b.

g_α / f_α 분기는 h, T, h^{-1} 의 닫힌꼴을 로그 공간에서 합성한 것이다.
두 사상 모두 x ↦ 1 - x 대칭이므로 오른쪽 분기는 왼쪽 분기에 1 - x 를 넣어 만든다
(x ≥ 1/2 에서 1 - x 는 정확히 계산된다).
"""

import logging
import math
from functools import partial

import numpy as np

from ..common.errors import DomainError
from .base import BoundaryTag, Branch, MapKind, OpenInterval, Orientation, PiecewiseMap
from .chart import TentChart
from .kernel import LOG2, LOG_FLOOR, TINY, ChebyshevConjugacy, ConjugacyKernel

logger = logging.getLogger(__name__)

UNIT = OpenInterval(0.0, 1.0)
LEFT = OpenInterval(0.0, 0.5)
RIGHT = OpenInterval(0.5, 1.0)


def tent(x: float) -> float:
    """전체 텐트 사상 T: [0,1] → [0,1]"""
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"tent: x 는 [0, 1] 안이어야 함 (got {x!r})", point=x)
    return 2.0 * x if x <= 0.5 else 2.0 - 2.0 * x


def _mirror(fn, x):
    return fn(1.0 - np.asarray(x, dtype=float))


# ─── tent ───

def make_tent_map() -> PiecewiseMap:
    left = Branch(
        domain=LEFT,
        orientation=Orientation.INCREASING,
        value=lambda x: 2.0 * np.asarray(x, dtype=float),
        log_abs_deriv=lambda x: np.full(np.shape(x), LOG2),
        image=UNIT,
        inverse=lambda v: 0.5 * np.asarray(v, dtype=float),
    )
    right = Branch(
        domain=RIGHT,
        orientation=Orientation.DECREASING,
        value=lambda x: 2.0 - 2.0 * np.asarray(x, dtype=float),
        log_abs_deriv=lambda x: np.full(np.shape(x), LOG2),
        image=UNIT,
        inverse=lambda v: 1.0 - 0.5 * np.asarray(v, dtype=float),
    )
    finite = (BoundaryTag.FINITE, BoundaryTag.FINITE)
    return PiecewiseMap(
        name="tent",
        ambient=UNIT,
        branches=(left, right),
        boundary_tags=(finite, finite),
        kind=MapKind.PLAIN,
        chart=TentChart(),
    )


# ─── g_α ───

def _g_left_value(k: ConjugacyKernel, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        w = k.two_alpha - np.log(2.0 * x)
        t = 2.0 * np.power(w, -1.0 / k.alpha)
        low = np.exp(np.maximum(k.log_K - w / k.two_alpha, LOG_FLOOR))
        s = 1.0 - t
        high = 1.0 - k._h_half(np.clip(s, TINY, 0.5))
        high = np.where(s <= 0.0, 1.0, high)
    return np.where(t <= 0.5, low, high)


def _g_left_log_deriv(k: ConjugacyKernel, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        w = k.two_alpha - np.log(2.0 * x)
        t = 2.0 * np.power(w, -1.0 / k.alpha)
        low = w * (1.0 - 1.0 / k.two_alpha) - k.alpha * LOG2
        s = 1.0 - t
        high = k._log_deriv_half(np.clip(s, TINY, 0.5)) + LOG2 - k._log_deriv_from_w(w)
        high = np.where(s <= 0.0, -np.inf, high)
    return np.where(t <= 0.5, low, high)


def _g_left_inverse(k: ConjugacyKernel, v):
    return k.eval(0.5 * np.asarray(k.inv(v)))


def make_g_alpha(alpha: float) -> PiecewiseMap:
    """g_α = h_α ∘ T ∘ h_α^{-1}: 0 에서 x^{2^{-α}} 형 cusp, c = 1/2 에서 평평한 임계점"""
    k = ConjugacyKernel(alpha)
    value = partial(_g_left_value, k)
    logd = partial(_g_left_log_deriv, k)
    inverse = partial(_g_left_inverse, k)
    left = Branch(LEFT, Orientation.INCREASING, value, logd, UNIT, inverse)
    right = Branch(
        RIGHT,
        Orientation.DECREASING,
        partial(_mirror, value),
        partial(_mirror, logd),
        UNIT,
        lambda v: 1.0 - np.asarray(inverse(v)),
    )
    return PiecewiseMap(
        name="g_alpha",
        ambient=UNIT,
        branches=(left, right),
        boundary_tags=(
            (BoundaryTag.PLUS_INFINITY, BoundaryTag.ZERO),
            (BoundaryTag.ZERO, BoundaryTag.MINUS_INFINITY),
        ),
        kind=MapKind.CUSP,
        chart=TentChart(k, inverse=False),
        params=(("alpha", float(alpha)),),
    )


# ─── f_α ───

def _f_left_value(k: ConjugacyKernel, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        w = k._neg_power(x)
        log2z = k.two_alpha - w
        low = np.power(w - LOG2, -1.0 / k.alpha)
        s = -np.expm1(log2z)
        high = 1.0 - k._inv_half(np.clip(s, TINY, 0.5))
        high = np.where(s <= 0.0, 1.0, high)
    return np.where(log2z <= -LOG2, low, high)


def _f_left_log_deriv(k: ConjugacyKernel, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        w = k._neg_power(x)
        log2z = k.two_alpha - w
        low = -((1.0 + k.alpha) / k.alpha) * np.log1p(-LOG2 / w)
        s = -np.expm1(log2z)
        vc = k._inv_half(np.clip(s, TINY, 0.5))
        high = LOG2 + k._log_deriv_from_w(w) - k._log_deriv_half(vc)
        high = np.where(s <= 0.0, np.inf, high)
    return np.where(log2z <= -LOG2, low, high)


def _f_left_inverse(k: ConjugacyKernel, v):
    return k.inv_from_log(np.asarray(k.log_eval(v)) - LOG2)


def make_f_alpha(alpha: float) -> PiecewiseMap:
    """f_α = h_α^{-1} ∘ T ∘ h_α: 0 은 포물형 고정점, c = 1/2 에서 미분이 발산"""
    k = ConjugacyKernel(alpha)
    value = partial(_f_left_value, k)
    logd = partial(_f_left_log_deriv, k)
    inverse = partial(_f_left_inverse, k)
    left = Branch(LEFT, Orientation.INCREASING, value, logd, UNIT, inverse)
    right = Branch(
        RIGHT,
        Orientation.DECREASING,
        partial(_mirror, value),
        partial(_mirror, logd),
        UNIT,
        lambda v: 1.0 - np.asarray(inverse(v)),
    )
    return PiecewiseMap(
        name="f_alpha",
        ambient=UNIT,
        branches=(left, right),
        boundary_tags=(
            (BoundaryTag.FINITE, BoundaryTag.PLUS_INFINITY),
            (BoundaryTag.MINUS_INFINITY, BoundaryTag.FINITE),
        ),
        kind=MapKind.PLAIN,
        chart=TentChart(k, inverse=True),
        params=(("alpha", float(alpha)),),
    )


# ─── Chebyshev q(x) = 4x(1-x) ───

def _quadratic(x):
    x = np.asarray(x, dtype=float)
    return 4.0 * x * (1.0 - x)


def _quadratic_log_deriv(x):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(4.0 - 8.0 * np.asarray(x, dtype=float)))


def make_chebyshev_map() -> PiecewiseMap:
    """q(x) = 4x(1-x): 임계점 1/2 에서 미분이 0 인 매끄러운 unimodal 사상, 밀도 1/(π√(x(1-x)))"""
    left = Branch(
        LEFT,
        Orientation.INCREASING,
        _quadratic,
        _quadratic_log_deriv,
        UNIT,
        lambda v: 0.5 * (1.0 - np.sqrt(1.0 - np.asarray(v, dtype=float))),
    )
    right = Branch(
        RIGHT,
        Orientation.DECREASING,
        _quadratic,
        _quadratic_log_deriv,
        UNIT,
        lambda v: 0.5 * (1.0 + np.sqrt(1.0 - np.asarray(v, dtype=float))),
    )
    return PiecewiseMap(
        name="chebyshev",
        ambient=UNIT,
        branches=(left, right),
        boundary_tags=(
            (BoundaryTag.FINITE, BoundaryTag.ZERO),
            (BoundaryTag.ZERO, BoundaryTag.FINITE),
        ),
        kind=MapKind.PLAIN,
        chart=TentChart(ChebyshevConjugacy()),
    )


# ─── g_b ───

def make_g_b(b: float, alpha: float) -> PiecewiseMap:
    """g_b(x) = -1 + b(1 - e^{-1-|x|^{-α}}) on (-1, 1), 0 에서 평평한 최대값 b - 1"""
    if not (0.0 < b <= 2.0):
        raise DomainError(f"g_b: b 는 (0, 2] 안이어야 함 (got {b!r})")
    if not (alpha > 0):
        raise DomainError(f"g_b: alpha 는 양수여야 함 (got {alpha!r})")
    log_b_alpha = math.log(b * alpha)

    def value(x):
        ax = np.abs(np.asarray(x, dtype=float))
        with np.errstate(all="ignore"):
            return -1.0 + b * (-np.expm1(-1.0 - np.power(ax, -alpha)))

    def log_abs_deriv(x):
        ax = np.abs(np.asarray(x, dtype=float))
        with np.errstate(all="ignore"):
            return log_b_alpha - (1.0 + alpha) * np.log(ax) - 1.0 - np.power(ax, -alpha)

    image = OpenInterval(-1.0 + b * (1.0 - math.exp(-2.0)), b - 1.0)
    left = Branch(OpenInterval(-1.0, 0.0), Orientation.INCREASING, value, log_abs_deriv, image)
    right = Branch(OpenInterval(0.0, 1.0), Orientation.DECREASING, value, log_abs_deriv, image)
    return PiecewiseMap(
        name="g_b",
        ambient=OpenInterval(-1.0, 1.0),
        branches=(left, right),
        boundary_tags=(
            (BoundaryTag.FINITE, BoundaryTag.ZERO),
            (BoundaryTag.ZERO, BoundaryTag.FINITE),
        ),
        kind=MapKind.PLAIN,
        params=(("b", float(b)), ("alpha", float(alpha))),
    )
