"""
켤레 커널 h_α: (0, 1/2] 에서 h(x) = K·exp(-x^{-α}), K = exp(2^α)/2, [1/2, 1) 은 1 - h(1-x).

ChebyshevConjugacy 는 q(x) = 4x(1-x) 의 켤레 sin²(πy/2) 를 같은 인터페이스로 제공한다.

모든 양은 로그 공간에서 계산하고 공개 인터페이스에서만 지수화한다 (하한 LOG_FLOOR).
x^{-α} 를 w 로 두면 log h = (2^α - log 2) - w 이고,
log Dh = (2^α - log 2) + log α + ((1+α)/α)·log w - w.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..common.errors import BoundaryError, DomainError

logger = logging.getLogger(__name__)

LOG_FLOOR = -745.0
LOG2 = math.log(2.0)
TINY = 5e-324


def _as_array(x) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _check_open(arr: np.ndarray, what: str) -> None:
    bad = ~((arr > 0.0) & (arr < 1.0))
    if np.any(bad):
        first = float(np.asarray(arr)[bad].ravel()[0]) if arr.ndim else float(arr)
        raise BoundaryError(f"{what}: 입력은 (0, 1) 안이어야 함 (got {first!r})", point=first)


@dataclass(frozen=True)
class ConjugacyKernel:
    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha 는 양수여야 함: {self.alpha!r}")

    @property
    def two_alpha(self) -> float:
        return 2.0 ** self.alpha

    @property
    def log_K(self) -> float:
        return self.two_alpha - LOG2

    @property
    def K(self) -> float:
        return math.exp(self.log_K) if self.log_K < 709.0 else math.inf

    # ─── 내부 헬퍼 (검사 없음, 배열) ───

    def _neg_power(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", divide="ignore"):
            return np.power(x, -self.alpha)

    def _log_deriv_from_w(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        with np.errstate(all="ignore"):
            out = self.log_K + math.log(self.alpha) + ((1.0 + self.alpha) / self.alpha) * np.log(w) - w
        return np.where(np.isinf(w), -np.inf, out)

    def _h_half(self, x: np.ndarray) -> np.ndarray:
        """(0, 1/2] 위의 h"""
        log_h = self.log_K - self._neg_power(x)
        out = np.exp(np.maximum(log_h, LOG_FLOOR))
        return np.where(x == 0.5, 0.5, out)

    def _inv_half(self, y: np.ndarray) -> np.ndarray:
        """(0, 1/2] 위의 h^{-1}"""
        with np.errstate(divide="ignore"):
            w = self.two_alpha - np.log(2.0 * y)
        out = np.power(w, -1.0 / self.alpha)
        return np.where(y == 0.5, 0.5, out)

    def _log_deriv_half(self, x: np.ndarray) -> np.ndarray:
        return self._log_deriv_from_w(self._neg_power(x))

    # ─── 공개 API ───

    def eval(self, x):
        arr, scalar = _as_array(x)
        _check_open(arr, "kernel_eval")
        m = np.minimum(arr, 1.0 - arr)
        hm = self._h_half(m)
        return _out(np.where(arr <= 0.5, hm, 1.0 - hm), scalar)

    def log_eval(self, x):
        """log h(x)"""
        arr, scalar = _as_array(x)
        _check_open(arr, "kernel_log_eval")
        m = np.minimum(arr, 1.0 - arr)
        low = self.log_K - self._neg_power(m)
        with np.errstate(all="ignore"):
            high = np.log1p(-self._h_half(m))
        out = np.where(arr <= 0.5, low, high)
        return _out(np.where(arr == 0.5, -LOG2, out), scalar)

    def inv(self, y):
        arr, scalar = _as_array(y)
        _check_open(arr, "kernel_inv")
        m = np.minimum(arr, 1.0 - arr)
        xm = self._inv_half(m)
        return _out(np.where(arr <= 0.5, xm, 1.0 - xm), scalar)

    def inv_from_log(self, log_y):
        """log y (y ≤ 1/2) 로부터 h^{-1}(y): y 가 언더플로하는 영역용"""
        arr, scalar = _as_array(log_y)
        if np.any(arr > -LOG2 + 1e-15):
            raise DomainError("inv_from_log 는 y ≤ 1/2 (log y ≤ -log 2) 에서만 정의")
        w = self.two_alpha - LOG2 - arr
        return _out(np.power(w, -1.0 / self.alpha), scalar)

    def log_deriv(self, x):
        """log Dh(x): Dh(1-x) = Dh(x)"""
        arr, scalar = _as_array(x)
        _check_open(arr, "kernel_logDh")
        m = np.minimum(arr, 1.0 - arr)
        return _out(self._log_deriv_half(m), scalar)

    def log_deriv_from_w(self, w):
        arr, scalar = _as_array(w)
        return _out(self._log_deriv_from_w(arr), scalar)

    def log_deriv_inv(self, y):
        """log D(h^{-1})(y) = -log y - log α - ((1+α)/α)·log w,  w = 2^α - log 2y"""
        arr, scalar = _as_array(y)
        _check_open(arr, "kernel_logDh_inv")
        m = np.minimum(arr, 1.0 - arr)
        w = self.two_alpha - np.log(2.0 * m)
        out = -np.log(m) - math.log(self.alpha) - ((1.0 + self.alpha) / self.alpha) * np.log(w)
        return _out(out, scalar)

    def deriv(self, x):
        return _out(np.exp(np.asarray(self.log_deriv(x))), np.ndim(x) == 0)

    def deriv_inv(self, y):
        return _out(np.exp(np.asarray(self.log_deriv_inv(y))), np.ndim(y) == 0)

    # ─── log-Jacobian 의 기울기 (pullback 선형 영역용) ───

    def log_deriv_slope(self, x):
        """d/dx log Dh(x) = -(1+α)/x + α·x^{-α-1} (x ≤ 1/2), 위쪽은 부호 반전"""
        arr, scalar = _as_array(x)
        _check_open(arr, "kernel_logDh_slope")
        m = np.minimum(arr, 1.0 - arr)
        with np.errstate(over="ignore"):
            half = -(1.0 + self.alpha) / m + self.alpha * np.power(m, -self.alpha - 1.0)
        return _out(np.where(arr <= 0.5, half, -half), scalar)

    def log_deriv_inv_slope(self, y):
        """d/dy log D(h^{-1})(y) = (c/w - 1)/y,  c = (1+α)/α (y ≤ 1/2), 위쪽은 부호 반전"""
        arr, scalar = _as_array(y)
        _check_open(arr, "kernel_logDh_inv_slope")
        m = np.minimum(arr, 1.0 - arr)
        w = self.two_alpha - np.log(2.0 * m)
        half = (((1.0 + self.alpha) / self.alpha) / w - 1.0) / m
        return _out(np.where(arr <= 0.5, half, -half), scalar)


@dataclass(frozen=True)
class ChebyshevConjugacy:
    """
    q(x) = 4x(1-x) 의 텐트 켤레: x = sin²(πy/2).

    ConjugacyKernel 과 같은 인터페이스 (eval = 텐트 → 앰비언트).
    """

    def eval(self, y):
        arr, scalar = _as_array(y)
        _check_open(arr, "chebyshev_eval")
        return _out(np.sin(0.5 * math.pi * arr) ** 2, scalar)

    def inv(self, x):
        arr, scalar = _as_array(x)
        _check_open(arr, "chebyshev_inv")
        return _out(np.arctan2(np.sqrt(arr), np.sqrt(1.0 - arr)) * (2.0 / math.pi), scalar)

    def log_deriv(self, y):
        """log (π/2)·sin(πy)"""
        arr, scalar = _as_array(y)
        _check_open(arr, "chebyshev_log_deriv")
        m = np.minimum(arr, 1.0 - arr)
        return _out(math.log(0.5 * math.pi) + np.log(np.sin(math.pi * m)), scalar)

    def log_deriv_inv(self, x):
        """-log π - ½·log x(1-x)"""
        arr, scalar = _as_array(x)
        _check_open(arr, "chebyshev_log_deriv_inv")
        return _out(-math.log(math.pi) - 0.5 * (np.log(arr) + np.log1p(-arr)), scalar)

    def log_deriv_slope(self, y):
        arr, scalar = _as_array(y)
        _check_open(arr, "chebyshev_log_deriv_slope")
        return _out(math.pi / np.tan(math.pi * arr), scalar)

    def log_deriv_inv_slope(self, x):
        arr, scalar = _as_array(x)
        _check_open(arr, "chebyshev_log_deriv_inv_slope")
        return _out(-0.5 * (1.0 / arr - 1.0 / (1.0 - arr)), scalar)
