"""
텐트 좌표계: 텐트 사상과 켤레인 사상의 좌표 변환과 불변밀도.

x = to_ambient(y) 이고 F = to_ambient ∘ T ∘ from_ambient.
  - tent:  항등
  - g_α:   to_ambient = h_α
  - f_α:   to_ambient = h_α^{-1}
  - q:     to_ambient = sin²(πy/2)  (Chebyshev 2차 사상 4x(1-x))
불변측도는 텐트 좌표의 Lebesgue 를 to_ambient 로 민 것이므로 CDF = from_ambient.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .base import OpenInterval
from .kernel import ChebyshevConjugacy, ConjugacyKernel

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
UNIT = OpenInterval(0.0, 1.0)

Conjugacy = Union[ConjugacyKernel, ChebyshevConjugacy]


@dataclass(frozen=True)
class TentChart:
    kernel: Optional[Conjugacy] = None
    inverse: bool = False

    @property
    def is_identity(self) -> bool:
        return self.kernel is None

    def to_ambient(self, y):
        if self.kernel is None:
            return y
        return self.kernel.inv(y) if self.inverse else self.kernel.eval(y)

    def from_ambient(self, x):
        if self.kernel is None:
            return x
        return self.kernel.eval(x) if self.inverse else self.kernel.inv(x)

    def log_jacobian(self, y):
        """log D(to_ambient)(y)"""
        if self.kernel is None:
            return np.zeros_like(np.asarray(y, dtype=float)) if np.ndim(y) else 0.0
        return self.kernel.log_deriv_inv(y) if self.inverse else self.kernel.log_deriv(y)

    def log_jacobian_slope(self, y):
        """d/dy log D(to_ambient)(y)"""
        if self.kernel is None:
            return np.zeros_like(np.asarray(y, dtype=float)) if np.ndim(y) else 0.0
        return self.kernel.log_deriv_inv_slope(y) if self.inverse else self.kernel.log_deriv_slope(y)

    def log_abs_deriv_via_chart(self, y, ty):
        """y 와 T(y) 에서의 log|DF(to_ambient(y))| = log 2 + J(T y) - J(y)"""
        return LOG2 + np.asarray(self.log_jacobian(ty)) - np.asarray(self.log_jacobian(y))


@dataclass(frozen=True)
class InvariantDensity:
    """켤레 사상의 절대연속 불변확률측도 (최대 엔트로피 측도)"""

    chart: TentChart
    interval: OpenInterval = UNIT

    def cdf(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        inside = (arr > self.interval.lo) & (arr < self.interval.hi)
        safe = np.where(inside, arr, 0.5)
        vals = np.asarray(self.chart.from_ambient(safe), dtype=float)
        out = np.where(arr <= self.interval.lo, 0.0, np.where(arr >= self.interval.hi, 1.0, vals))
        return float(out) if out.ndim == 0 else out

    def ppf(self, u):
        return self.chart.to_ambient(u)

    def log_pdf(self, x):
        y = self.chart.from_ambient(x)
        return -np.asarray(self.chart.log_jacobian(y)) if np.ndim(x) else -float(self.chart.log_jacobian(y))

    def pdf(self, x):
        return np.exp(self.log_pdf(x))

    def bin_masses(self, edges: np.ndarray) -> np.ndarray:
        return np.diff(np.asarray(self.cdf(edges), dtype=float))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(count)
        u = np.where(u == 0.0, 2.0 ** -53, u)
        # ppf 가 끝점으로 반올림되는 경우 (g_α 의 0 근방 등) 열린 구간 안으로
        x = np.asarray(self.ppf(u), dtype=float)
        lo, hi = self.interval.lo, self.interval.hi
        return np.clip(x, np.nextafter(lo, hi), np.nextafter(hi, lo))
