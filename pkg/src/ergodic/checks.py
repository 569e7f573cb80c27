"""
추정값 사이의 부등식/동치 점검: Ruelle 부등식, h = χ 와 밀도 하한
"""

import logging
from dataclasses import dataclass

from ..maps import OpenInterval
from .density import DensityEstimate, min_density_on

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RuelleResult:
    passed: bool
    entropy: float
    chi: float
    tolerance: float
    margin: float


def ruelle_check(h_estimate: float, chi_estimate: float, tolerance: float = 0.02) -> RuelleResult:
    """h ≤ max(0, χ) + tolerance"""
    margin = max(0.0, chi_estimate) + tolerance - h_estimate
    passed = margin >= 0.0
    if not passed:
        logger.warning(f"ruelle_check 실패: h={h_estimate:.5f} > max(0, χ={chi_estimate:.5f}) + {tolerance}")
    return RuelleResult(passed, h_estimate, chi_estimate, tolerance, margin)


@dataclass(frozen=True)
class AcipEquivalence:
    passed: bool
    gap: float
    min_central_density: float
    tolerance: float


def acip_equivalence_check(
    h_estimate: float,
    chi_estimate: float,
    estimate: DensityEstimate,
    tolerance: float = 0.03,
) -> AcipEquivalence:
    """|h - χ| ≤ tolerance 이고 가운데 절반 구간에서 밀도가 양수로 하한"""
    lo, hi = estimate.interval.as_tuple()
    width = hi - lo
    central = OpenInterval(lo + 0.25 * width, lo + 0.75 * width)
    floor = min_density_on(estimate, central)
    gap = abs(h_estimate - chi_estimate)
    return AcipEquivalence(gap <= tolerance and floor > 0.0, gap, floor, tolerance)
