"""
특이적분 분류: ∫ |log|Df|| · weight 가 특이점 근방에서 유한한가.

특이점 s 주변 dyadic annulus [s ± 2^-(k+1), s ± 2^-k] 마다 64점 Gauss–Legendre 로
A_k 를 구하고, 국소 멱지수 p_k = -log(A_{k+1}/A_k) / log((k+1)/k) 로 판정한다.
Bertrand 형 적분에서는 A_k ~ k^{-1/α} 이라 기하 비율은 α 와 무관하게 1 로 가므로
비율 대신 멱지수를 외삽한다 (p* > 1 이면 수렴).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..common.errors import GeometryError, PreconditionError
from ..maps import InvariantDensity, PiecewiseMap

logger = logging.getLogger(__name__)

GL_NODES = 64
DEFAULT_K_RANGE = (8, 48)

# 판정 임계값
FAR_CONVERGENT = 1.5
EXTRAPOLATED_CONVERGENT = 1.05
EXTRAPOLATED_DIVERGENT = 1.02
MASS_FACTOR = 10.0
FAR_WINDOW = 3


class Verdict(str, Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


class Weight(str, Enum):
    LEBESGUE = "lebesgue"
    EXACT = "exact"


@dataclass(frozen=True)
class IntegrabilityVerdict:
    verdict: Verdict
    annulus_sums: Tuple[float, ...]
    fitted_exponent: float
    k_range: Tuple[int, int]
    fitted_ratio: float
    far_exponent: float
    local_exponents: Tuple[float, ...] = field(default=())

    @property
    def total(self) -> float:
        return math.fsum(self.annulus_sums)


def _annuli(point: float, side: str, k: int) -> List[Tuple[float, float]]:
    inner, outer = 2.0 ** -(k + 1), 2.0 ** -k
    out = []
    if side in ("left", "both"):
        out.append((point - outer, point - inner))
    if side in ("right", "both"):
        out.append((point + inner, point + outer))
    if not out:
        raise PreconditionError(f"side 는 left/right/both 중 하나여야 함 (got {side!r})")
    return out


def _branch_for(fmap: PiecewiseMap, lo: float, hi: float):
    for branch in fmap.branches:
        if branch.domain.lo <= lo and hi <= branch.domain.hi:
            return branch
    raise GeometryError(
        f"{fmap.name}: annulus ({lo:.3g}, {hi:.3g}) 가 분기 경계를 가로지름", lo=lo, hi=hi
    )


def annulus_integrals(
    fmap: PiecewiseMap,
    singular_point: float,
    side: str,
    k_values: np.ndarray,
    density: Optional[InvariantDensity] = None,
) -> np.ndarray:
    nodes, weights = np.polynomial.legendre.leggauss(GL_NODES)
    sums = []
    for k in k_values:
        total = 0.0
        for lo, hi in _annuli(singular_point, side, int(k)):
            branch = _branch_for(fmap, lo, hi)
            half = 0.5 * (hi - lo)
            xs = 0.5 * (hi + lo) + half * nodes
            with np.errstate(all="ignore"):
                integrand = np.abs(np.asarray(branch.log_abs_deriv(xs), dtype=float))
                if density is not None:
                    integrand = integrand * np.exp(np.asarray(density.log_pdf(xs), dtype=float))
            total += half * float(np.dot(weights, integrand))
        sums.append(total)
    return np.asarray(sums)


def local_exponents(k_values: np.ndarray, sums: np.ndarray) -> np.ndarray:
    k = k_values.astype(float)
    with np.errstate(all="ignore"):
        return -np.log(sums[1:] / sums[:-1]) / np.log((k[1:]) / k[:-1])


def _extrapolate(k_values: np.ndarray, exponents: np.ndarray) -> float:
    """p_k 를 1/(k+½) 에 대한 3차식으로 맞춰 k → ∞ 로 외삽 (범위 상반부)"""
    t = 1.0 / (k_values[:-1] + 0.5)
    upper = slice(len(t) // 2, None)
    tt, pp = t[upper], exponents[upper]
    ok = np.isfinite(pp)
    deg = min(3, int(ok.sum()) - 1)
    if deg < 0:
        return math.nan
    coeffs = np.polyfit(tt[ok], pp[ok], deg)
    return float(np.polyval(coeffs, 0.0))


def singular_integral_classify(
    fmap: PiecewiseMap,
    singular_point: float,
    side: str = "right",
    weight: str = "lebesgue",
    k_range: Tuple[int, int] = DEFAULT_K_RANGE,
    density: Optional[InvariantDensity] = None,
) -> IntegrabilityVerdict:
    """|log|Df|| 의 특이점 근방 적분가능성 판정 (convergent / divergent / inconclusive)"""
    weight = Weight(weight)
    if weight is Weight.EXACT and density is None:
        if fmap.chart is None:
            raise PreconditionError(f"{fmap.name}: exact 가중치에는 닫힌꼴 불변밀도가 필요함")
        density = InvariantDensity(fmap.chart, fmap.ambient)
    if weight is Weight.LEBESGUE:
        density = None

    k_lo, k_hi = k_range
    if not (1 <= k_lo and k_hi - k_lo >= 4):
        raise PreconditionError(f"k_range 가 너무 좁음: {k_range}")
    k_values = np.arange(k_lo, k_hi + 1)
    sums = annulus_integrals(fmap, singular_point, side, k_values, density)
    exps = local_exponents(k_values, sums)

    far = float(np.nanmean(exps[-FAR_WINDOW:]))
    p_star = _extrapolate(k_values, exps)
    positive = sums > 0
    slope = np.polyfit(k_values[positive], np.log(sums[positive]), 1)[0] if positive.sum() >= 2 else math.nan
    ratio = float(math.exp(slope)) if math.isfinite(slope) else math.nan

    total = math.fsum(sums)
    heavy = total > MASS_FACTOR * sums[0]
    if far >= FAR_CONVERGENT:
        verdict = Verdict.CONVERGENT
    elif far <= 0.0 and heavy:
        verdict = Verdict.DIVERGENT
    elif p_star >= EXTRAPOLATED_CONVERGENT:
        verdict = Verdict.CONVERGENT
    elif p_star <= EXTRAPOLATED_DIVERGENT and heavy:
        verdict = Verdict.DIVERGENT
    else:
        verdict = Verdict.INCONCLUSIVE

    logger.info(
        f"classify({fmap.name}, s={singular_point}, {weight.value}): {verdict.value} "
        f"(p*={p_star:.4f}, p_far={far:.4f}, ratio={ratio:.5f})"
    )
    return IntegrabilityVerdict(
        verdict=verdict,
        annulus_sums=tuple(float(v) for v in sums),
        fitted_exponent=p_star,
        k_range=(int(k_lo), int(k_hi)),
        fitted_ratio=ratio,
        far_exponent=far,
        local_exponents=tuple(float(v) for v in exps),
    )
