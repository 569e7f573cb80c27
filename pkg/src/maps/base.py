"""
구간 사상 기본 타입: OpenInterval, Branch, PiecewiseMap

분기 함수(value / log_abs_deriv / inverse)는 numpy 벡터화 함수로 받는다.
스칼라를 넣으면 0-d 결과가 나오고, PiecewiseMap 의 스칼라 API 가 float 로 변환한다.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..common.errors import (
    DomainError,
    GeometryError,
    NoPreimageError,
    UndefinedPointError,
)

if TYPE_CHECKING:
    from .chart import TentChart

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]


class Orientation(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class BoundaryTag(str, Enum):
    ZERO = "zero"
    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"
    FINITE = "finite"


class MapKind(str, Enum):
    CUSP = "cusp"
    PLAIN = "plain"


@dataclass(frozen=True)
class OpenInterval:
    """열린 구간 (lo, hi), lo < hi"""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise DomainError(f"OpenInterval 은 lo < hi 여야 함: ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "OpenInterval", tol: float = 0.0) -> bool:
        return other.lo >= self.lo - tol and other.hi <= self.hi + tol

    def intersect(self, other: "OpenInterval") -> Optional["OpenInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return OpenInterval(lo, hi) if lo < hi else None

    def disjoint(self, other: "OpenInterval", tol: float = 0.0) -> bool:
        return self.hi <= other.lo + tol or other.hi <= self.lo + tol

    def edges(self, bins: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, bins + 1)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class Branch:
    """단조 분기 하나: domain 위의 C^1 미분동형 사상"""

    domain: OpenInterval
    orientation: Orientation
    value: ArrayFn
    log_abs_deriv: ArrayFn
    image: OpenInterval
    inverse: Optional[ArrayFn] = None

    @property
    def sign(self) -> float:
        return 1.0 if self.orientation is Orientation.INCREASING else -1.0

    def deriv(self, x):
        """부호 있는 도함수"""
        return self.sign * np.exp(self.log_abs_deriv(x))

    def limit_at_lo(self) -> float:
        return self.image.lo if self.orientation is Orientation.INCREASING else self.image.hi

    def limit_at_hi(self) -> float:
        return self.image.hi if self.orientation is Orientation.INCREASING else self.image.lo

    def value_with_limits(self, x: float) -> float:
        """domain 끝점(및 바깥)에서는 한쪽 극한값을 돌려주는 평가"""
        if x <= self.domain.lo:
            return self.limit_at_lo()
        if x >= self.domain.hi:
            return self.limit_at_hi()
        return float(self.value(x))

    def image_of(self, part: OpenInterval) -> Optional[OpenInterval]:
        """domain 안의 부분구간 part 의 상 (단조성으로 끝점만 평가)"""
        a = self.value_with_limits(part.lo)
        b = self.value_with_limits(part.hi)
        lo, hi = (a, b) if a <= b else (b, a)
        return OpenInterval(lo, hi) if lo < hi else None


@dataclass(frozen=True)
class PiecewiseMap:
    """순서 있는 단조 분기들의 모음 (cusp map 구조)"""

    name: str
    ambient: OpenInterval
    branches: Tuple[Branch, ...]
    boundary_tags: Tuple[Tuple[BoundaryTag, BoundaryTag], ...]
    kind: MapKind = MapKind.PLAIN
    chart: Optional["TentChart"] = None
    params: Tuple[Tuple[str, float], ...] = field(default=())

    def __post_init__(self):
        if len(self.boundary_tags) != len(self.branches):
            raise GeometryError("boundary_tags 는 분기마다 (lo, hi) 한 쌍이어야 함")
        doms = [b.domain for b in self.branches]
        for d in doms:
            if not self.ambient.contains_interval(d):
                raise GeometryError(f"분기 domain {d.as_tuple()} 가 ambient 밖에 있음")
        for a, b in zip(doms, doms[1:]):
            if a.hi > b.lo:
                raise GeometryError("분기 domain 은 서로소이고 오름차순이어야 함")
        if self.kind is MapKind.CUSP:
            for pair in self.boundary_tags:
                if BoundaryTag.FINITE in pair:
                    raise GeometryError("cusp 사상의 경계 태그는 zero / ±infinity 만 허용")

    # ─── 분기 조회 ───

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array([b.domain.lo for b in self.branches] + [self.branches[-1].domain.hi])

    def param(self, key: str, default: Optional[float] = None) -> Optional[float]:
        return dict(self.params).get(key, default)

    def find_branch(self, x: float) -> Optional[int]:
        for i, b in enumerate(self.branches):
            if b.domain.contains(x):
                return i
        return None

    def branch_of(self, x: float) -> int:
        idx = self.find_branch(x)
        if idx is None:
            raise UndefinedPointError(f"{self.name}: x={x!r} 는 어느 분기에도 속하지 않음", point=x)
        return idx

    def branch_ids(self, xs: np.ndarray) -> np.ndarray:
        """배열 판: 분기 밖(gap/경계)은 -1"""
        xs = np.asarray(xs, dtype=float)
        out = np.full(xs.shape, -1, dtype=np.int64)
        for i, b in enumerate(self.branches):
            out[(xs > b.domain.lo) & (xs < b.domain.hi)] = i
        return out

    # ─── 평가 ───

    def eval(self, x: float) -> float:
        return float(self.branches[self.branch_of(x)].value(x))

    def log_abs_deriv(self, x: float) -> float:
        return float(self.branches[self.branch_of(x)].log_abs_deriv(x))

    def deriv(self, x: float) -> float:
        return float(self.branches[self.branch_of(x)].deriv(x))

    def eval_array(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(값, log|Df|): 분기 밖은 nan"""
        xs = np.asarray(xs, dtype=float)
        ids = self.branch_ids(xs)
        values = np.full(xs.shape, np.nan)
        logd = np.full(xs.shape, np.nan)
        for i, b in enumerate(self.branches):
            mask = ids == i
            if np.any(mask):
                values[mask] = b.value(xs[mask])
                logd[mask] = b.log_abs_deriv(xs[mask])
        return values, logd

    # ─── 역상 ───

    def pullback(self, index: int, y: float, method: str = "auto") -> float:
        """분기 index 위에서 f(x) = y 인 유일한 x.

        분기가 닫힌꼴 역함수를 가지면 그것을, 아니면 bracketing 해법 + Newton 한 번.
        method="bisect" 이면 닫힌꼴이 있어도 수치 해법을 강제한다.
        """
        branch = self.branches[index]
        if not branch.image.contains(y):
            raise NoPreimageError(
                f"{self.name}: y={y!r} 는 분기 {index} 의 상 {branch.image.as_tuple()} 밖",
                branch=index,
                point=y,
            )
        if branch.inverse is not None and method != "bisect":
            return float(branch.inverse(y))
        return _solve_on_branch(branch, y)

    def preimages(self, y: float) -> List[Tuple[int, float]]:
        out = []
        for i, b in enumerate(self.branches):
            if b.image.contains(y):
                out.append((i, self.pullback(i, y)))
        return out

    # ─── 분기 word 합성 ───
    # chart 가 있으면 텐트 좌표에서 합성한다 (분기 0 = 왼쪽 증가, 1 = 오른쪽 감소).
    # 텐트 좌표의 2u, 2 - 2u, u/2, 1 - u/2 는 부동소수에서 정확하다.

    def _from_chart(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = (x > self.ambient.lo) & (x < self.ambient.hi)
        u = np.asarray(self.chart.from_ambient(np.where(inside, x, self.ambient.center)), dtype=float)
        return np.where(inside, u, np.where(x <= self.ambient.lo, 0.0, 1.0))

    def _to_chart_ambient(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        inside = (u > 0.0) & (u < 1.0)
        x = np.asarray(self.chart.to_ambient(np.where(inside, u, 0.5)), dtype=float)
        return np.where(inside, x, np.where(u <= 0.0, self.ambient.lo, self.ambient.hi))

    def tent_word(self, u, word: Sequence[int]) -> np.ndarray:
        """텐트 좌표에서 word 를 따라 정방향 반복"""
        u = np.asarray(u, dtype=float)
        for s in word:
            u = 2.0 * u if s == 0 else 2.0 - 2.0 * u
        return u

    def apply_word(self, x, word: Sequence[int]):
        """f_{w_n} ∘ … ∘ f_{w_1}(x)"""
        if self.chart is not None:
            out = self._to_chart_ambient(self.tent_word(self._from_chart(x), word))
        else:
            out = np.asarray(x, dtype=float)
            for s in word:
                out = np.asarray(self.branches[s].value(out), dtype=float)
        return float(out) if np.ndim(x) == 0 else out

    def pull_word(self, y, word: Sequence[int]):
        """apply_word 의 역: word 를 역순으로 분기 역함수에 넣는다"""
        if self.chart is not None:
            u = self._from_chart(y)
            for s in reversed(word):
                u = 0.5 * u if s == 0 else 1.0 - 0.5 * u
            out = self._to_chart_ambient(u)
        else:
            out = np.atleast_1d(np.asarray(y, dtype=float))
            for s in reversed(word):
                branch = self.branches[s]
                if branch.inverse is not None:
                    out = np.asarray(branch.inverse(out), dtype=float)
                else:
                    out = np.array([self.pullback(s, float(v)) for v in out])
            out = out.reshape(np.shape(y))
        return float(out) if np.ndim(y) == 0 else out

    def log_deriv_word_tent(self, u, word: Sequence[int]):
        """텐트 좌표 u 에서 log|D(f_word)| = n·log 2 + J(T^n u) - J(u), J = chart.log_jacobian"""
        u0 = np.asarray(u, dtype=float)
        un = self.tent_word(u0, word)
        with np.errstate(all="ignore"):
            out = (
                len(word) * math.log(2.0)
                + np.asarray(self.chart.log_jacobian(un), dtype=float)
                - np.asarray(self.chart.log_jacobian(u0), dtype=float)
            )
        return float(out) if np.ndim(u) == 0 else out

    def log_deriv_word(self, x, word: Sequence[int]):
        """word 를 따른 log|D(f^n)(x)|. chart 가 없으면 분기별 합 (분기 밖은 nan)"""
        if self.chart is not None:
            return self.log_deriv_word_tent(self._from_chart(x), word)
        xs = np.asarray(x, dtype=float)
        total = np.zeros(xs.shape)
        with np.errstate(all="ignore"):
            for s in word:
                branch = self.branches[s]
                total = total + np.asarray(branch.log_abs_deriv(xs), dtype=float)
                xs = np.asarray(branch.value(xs), dtype=float)
        return float(total) if np.ndim(x) == 0 else total


def _solve_on_branch(branch: Branch, y: float) -> float:
    lo, hi = branch.domain.lo, branch.domain.hi

    def residual(t: float) -> float:
        return branch.value_with_limits(t) - y

    x = brentq(residual, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)

    # Newton 보정 1회: domain 안이고 잔차가 줄 때만 채택
    r0 = residual(x)
    d = float(branch.deriv(x))
    if math.isfinite(d) and d != 0.0 and r0 != 0.0:
        x1 = x - r0 / d
        if branch.domain.contains(x1) and abs(residual(x1)) < abs(r0):
            x = x1
    return float(x)


# ─── 경계 태그 검증 ───

@dataclass(frozen=True)
class TagCheck:
    branch: int
    side: str
    tag: BoundaryTag
    log_values: Tuple[float, ...]
    ok: bool


def _tag_trend_ok(tag: BoundaryTag, values: np.ndarray, sign: float) -> bool:
    tail = values[len(values) // 2:]
    if tag is BoundaryTag.FINITE:
        if not np.all(np.isfinite(tail)):
            return False
        return float(np.max(np.abs(np.diff(tail)))) <= 1e-2 * (1.0 + abs(float(tail[-1])))
    finite = tail[np.isfinite(tail)]
    if tag is BoundaryTag.ZERO:
        return bool(np.all(np.diff(finite) <= 1e-12)) and (
            len(finite) < len(tail) or finite[-1] < finite[0]
        )
    # ±infinity: |Df| 단조 증가 + 분기 방향과 부호 일치
    expected = 1.0 if tag is BoundaryTag.PLUS_INFINITY else -1.0
    if sign != expected:
        return False
    return bool(np.all(np.diff(finite) >= -1e-12)) and (
        len(finite) < len(tail) or finite[-1] > finite[0]
    )


def verify_boundary_tags(fmap: PiecewiseMap, k_values: Sequence[int] = range(4, 41)) -> List[TagCheck]:
    """endpoint ± 2^-k·|domain| (k=4..40) 표본으로 경계 태그의 추세를 확인"""
    checks: List[TagCheck] = []
    for i, (branch, tags) in enumerate(zip(fmap.branches, fmap.boundary_tags)):
        width = branch.domain.length
        for side, tag in zip(("lo", "hi"), tags):
            xs = []
            for k in k_values:
                offset = width * 2.0 ** (-k)
                xs.append(branch.domain.lo + offset if side == "lo" else branch.domain.hi - offset)
            with np.errstate(all="ignore"):
                logs = np.asarray(branch.log_abs_deriv(np.asarray(xs)), dtype=float)
            ok = _tag_trend_ok(tag, logs, branch.sign)
            if not ok:
                logger.warning(f"{fmap.name}: 분기 {i} {side} 태그 {tag.value} 추세 불일치")
            checks.append(TagCheck(i, side, tag, tuple(float(v) for v in logs), ok))
    return checks
