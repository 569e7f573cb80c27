"""
왜곡(distortion) 도구: Hölder 조건 검사, c₀ 상수, 비율 경계, 왜곡 반경 부등식.

φ 는 |Df| 가 작을 때 Df, 클 때 1/Df 로 읽는다.
  small_derivative:  |Df(x)|, |Df(x')| ≤ 2   에서 |Df(x) - Df(x')| ≤ C|x-x'|^ε
  large_derivative:  |Df(x)|, |Df(x')| ≥ 1/2 에서 |1/Df(x) - 1/Df(x')| ≤ C|x-x'|^ε
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..common.errors import DomainError
from ..common.utils import make_rng
from ..maps import Branch, OpenInterval, PiecewiseMap

logger = logging.getLogger(__name__)

# log(1 - a/2) > -a 는 a ≈ 1.594 까지 성립하므로 log 2 미만이면 충분
A0 = 0.99 * math.log(2.0)


class HolderRegime(str, Enum):
    SMALL_DERIVATIVE = "small_derivative"
    LARGE_DERIVATIVE = "large_derivative"


@dataclass(frozen=True)
class HolderReport:
    regime: HolderRegime
    max_ratio: float
    witness: Optional[Tuple[float, float]]
    passed: bool
    constant: float
    epsilon: float
    pairs_used: int
    regime_empty: bool = False


def c0_constant(C: float, epsilon: float) -> float:
    """c₀ = 0.99·min(a₀, 1/(2C)),  a₀ = 0.99·log 2"""
    if not (C > 0 and epsilon > 0):
        raise DomainError(f"c0_constant: C, epsilon 은 양수여야 함 (C={C}, epsilon={epsilon})")
    return 0.99 * min(A0, 1.0 / (2.0 * C))


def _sample_pairs(window: OpenInterval, n_pairs: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = make_rng(seed)
    x = rng.uniform(window.lo, window.hi, n_pairs)
    xp = rng.uniform(window.lo, window.hi, n_pairs)
    inside = (x > window.lo) & (x < window.hi) & (xp > window.lo) & (xp < window.hi) & (x != xp)
    return x[inside], xp[inside]


def _phi_values(branch: Branch, x: np.ndarray, regime: HolderRegime):
    """(regime mask, φ(x)): φ = Df 또는 1/Df, 로그에서 계산"""
    with np.errstate(all="ignore"):
        logd = np.asarray(branch.log_abs_deriv(x), dtype=float)
    if regime is HolderRegime.SMALL_DERIVATIVE:
        mask = logd <= math.log(2.0)
        phi = branch.sign * np.exp(logd)
    else:
        mask = logd >= -math.log(2.0)
        phi = branch.sign * np.exp(-logd)
    return mask & np.isfinite(logd), phi


def _holder_ratios(branch, x, xp, epsilon, regime):
    mask_x, phi_x = _phi_values(branch, x, regime)
    mask_p, phi_p = _phi_values(branch, xp, regime)
    keep = mask_x & mask_p
    dist = np.abs(x - xp) ** epsilon
    ratios = np.abs(phi_x - phi_p)[keep] / dist[keep]
    return keep, ratios, phi_x, phi_p


def _report(regime, ratios, x, xp, C, epsilon) -> HolderReport:
    if ratios.size == 0:
        return HolderReport(regime, 0.0, None, True, C, epsilon, 0, regime_empty=True)
    j = int(np.argmax(ratios))
    max_ratio = float(ratios[j])
    return HolderReport(
        regime=regime,
        max_ratio=max_ratio,
        witness=(float(x[j]), float(xp[j])),
        passed=max_ratio <= C,
        constant=C,
        epsilon=epsilon,
        pairs_used=int(ratios.size),
    )


def holder_check(
    branch: Branch,
    C: float,
    epsilon: float,
    n_pairs: int = 10_000,
    seed: int = 0,
    window: Optional[OpenInterval] = None,
) -> Tuple[HolderReport, HolderReport]:
    """조건 (2)/(3) 각각의 최대 Hölder 비율: (small_derivative, large_derivative)"""
    window = window or branch.domain
    x, xp = _sample_pairs(window, n_pairs, seed)
    reports = []
    for regime in (HolderRegime.SMALL_DERIVATIVE, HolderRegime.LARGE_DERIVATIVE):
        keep, ratios, _, _ = _holder_ratios(branch, x, xp, epsilon, regime)
        reports.append(_report(regime, ratios, x[keep], xp[keep], C, epsilon))
    small, large = reports
    logger.debug(
        f"holder_check: small={small.max_ratio:.4g} ({small.pairs_used}), "
        f"large={large.max_ratio:.4g} ({large.pairs_used})"
    )
    return small, large


def calibrate_holder_constant(
    branch: Branch,
    epsilon: float,
    regime: HolderRegime,
    n_pairs: int = 100_000,
    seed: int = 0,
    window: Optional[OpenInterval] = None,
) -> float:
    """경험적 Hölder 상수 = 최대 비율 × 2 (regime 이 비면 0)"""
    window = window or branch.domain
    x, xp = _sample_pairs(window, n_pairs, seed)
    _, ratios, _, _ = _holder_ratios(branch, x, xp, epsilon, regime)
    return 2.0 * float(ratios.max()) if ratios.size else 0.0


# ─── 비율 경계 ───

@dataclass(frozen=True)
class RatioBoundReport:
    pairs_checked: int
    violations: int
    worst_margin: float

    @property
    def holds(self) -> bool:
        return self.violations == 0


def ratio_bound_check(
    branch: Branch,
    C: float,
    epsilon: float,
    c: float,
    regime: HolderRegime,
    n_pairs: int = 10_000,
    seed: int = 0,
    window: Optional[OpenInterval] = None,
) -> RatioBoundReport:
    """|φ(x)| > c 인 쌍에서 1 - C|x-x'|^ε/c ≤ φ(x')/φ(x) ≤ 1 + C|x-x'|^ε/c"""
    window = window or branch.domain
    x, xp = _sample_pairs(window, n_pairs, seed)
    keep, _, phi_x, phi_p = _holder_ratios(branch, x, xp, epsilon, regime)
    keep &= np.abs(phi_x) > c
    if not np.any(keep):
        return RatioBoundReport(0, 0, math.inf)
    bound = C * np.abs(x - xp)[keep] ** epsilon / c
    ratio = phi_p[keep] / phi_x[keep]
    slack = 1e-12 * (1.0 + bound)
    margin = bound + slack - np.abs(ratio - 1.0)
    violations = int(np.count_nonzero(margin < 0))
    if violations:
        logger.warning(f"ratio_bound_check: {violations} 쌍이 비율 경계를 벗어남")
    return RatioBoundReport(int(keep.sum()), violations, float(margin.min()))


# ─── 왜곡 반경 부등식 ───

class DistortionStatus(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    PRECONDITIONS_VIOLATED = "preconditions_violated"


@dataclass(frozen=True)
class DistortionCheck:
    status: DistortionStatus
    violated: Tuple[str, ...] = ()
    same_branch: Optional[bool] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.status is DistortionStatus.HOLDS


def distortion_bound_check(
    fmap: PiecewiseMap,
    x: float,
    x_prime: float,
    c: float,
    C: float,
    epsilon: float,
) -> DistortionCheck:
    """0 < c < c₀, |x-x'|^ε < c³, c < |Df(x)| < 1/c 이면
    같은 분기이고 |log|Df(x)| - log|Df(x')|| ≤ c·|x-x'|^ε / c³ 인지 확인"""
    bx = fmap.branch_of(x)
    bxp = fmap.branch_of(x_prime)

    violated = []
    if not (0.0 < c < c0_constant(C, epsilon)):
        violated.append("c_range")
    gap = abs(x - x_prime) ** epsilon
    if not gap < c ** 3:
        violated.append("radius")
    logd = fmap.log_abs_deriv(x)
    if not (math.log(c) < logd < -math.log(c)):
        violated.append("derivative_range")
    if violated:
        return DistortionCheck(DistortionStatus.PRECONDITIONS_VIOLATED, tuple(violated))

    same = bx == bxp
    if not same:
        return DistortionCheck(DistortionStatus.FAILS, ("same_branch",), False)
    lhs = abs(logd - fmap.log_abs_deriv(x_prime))
    rhs = c * gap / c ** 3
    status = DistortionStatus.HOLDS if lhs <= rhs else DistortionStatus.FAILS
    return DistortionCheck(status, () if status is DistortionStatus.HOLDS else ("inequality",), True, lhs, rhs)


@dataclass(frozen=True)
class DistortionSweep:
    checked: int
    failures: int
    skipped: int


def distortion_sweep(
    fmap: PiecewiseMap,
    C: float,
    epsilon: float,
    c: float,
    count: int = 10_000,
    seed: int = 0,
    window: Optional[OpenInterval] = None,
) -> DistortionSweep:
    """무작위 허용 삼중쌍 (x, x', c) 에 대한 distortion_bound_check 집계"""
    window = window or fmap.ambient
    rng = make_rng(seed)
    radius = 0.999 * c ** (3.0 / epsilon)
    checked = failures = skipped = 0
    for x, delta in zip(rng.uniform(window.lo, window.hi, count), rng.uniform(-radius, radius, count)):
        xp = float(x + delta)
        if fmap.find_branch(float(x)) is None or fmap.find_branch(xp) is None:
            skipped += 1
            continue
        result = distortion_bound_check(fmap, float(x), xp, c, C, epsilon)
        if result.status is DistortionStatus.PRECONDITIONS_VIOLATED:
            skipped += 1
            continue
        checked += 1
        failures += 0 if result.holds else 1
    if failures:
        logger.warning(f"distortion_sweep({fmap.name}): {failures}/{checked} 실패")
    return DistortionSweep(checked, failures, skipped)
