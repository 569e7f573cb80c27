"""
국소 차원 추정: log μ(B(x, r)) 대 log r 의 최소제곱 기울기
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..common.errors import PreconditionError
from ..common.utils import make_rng

logger = logging.getLogger(__name__)

Sampler = Callable[[int, np.random.Generator], np.ndarray]

FRACTION_LO = 1e-4
FRACTION_HI = 1e-1
MIN_RADII = 3


@dataclass(frozen=True)
class LocalDimensionEstimate:
    slopes: np.ndarray  # 점별 기울기, 적합 불가면 nan
    pooled: float
    radii: np.ndarray
    dropped: int  # 적합에서 빠진 (점, 반경) 쌍 수
    sample_count: int


def geometric_radii(r_min: float, r_max: float, count: int) -> np.ndarray:
    return np.geomspace(r_min, r_max, count)


def ball_fractions(points: np.ndarray, samples: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """fractions[i, j] = #{s : |s - x_i| ≤ r_j} / N"""
    ordered = np.sort(np.asarray(samples, dtype=float))
    pts = np.asarray(points, dtype=float)[:, None]
    lo = np.searchsorted(ordered, pts - radii[None, :], side="left")
    hi = np.searchsorted(ordered, pts + radii[None, :], side="right")
    return (hi - lo) / ordered.size


def local_dimension(
    points: Sequence[float],
    sampler: Sampler,
    radii: Sequence[float],
    sample_count: int = 1_000_000,
    seed: int = 0,
) -> LocalDimensionEstimate:
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2 or radii.max() / radii.min() < 1e4:
        raise PreconditionError("radii 는 최소 4 decade 에 걸쳐야 함")
    samples = sampler(sample_count, make_rng(seed))
    fractions = ball_fractions(np.asarray(points), samples, radii)

    log_r = np.log(radii)
    slopes = np.full(fractions.shape[0], np.nan)
    dropped = 0
    for i, row in enumerate(fractions):
        usable = (row > 0) & (row >= FRACTION_LO) & (row <= FRACTION_HI)
        dropped += int(radii.size - usable.sum())
        if usable.sum() >= MIN_RADII:
            slopes[i] = np.polyfit(log_r[usable], np.log(row[usable]), 1)[0]

    valid = np.isfinite(slopes)
    if not valid.any():
        raise PreconditionError("어느 점에서도 기울기를 맞출 반경이 부족함")
    pooled = float(np.mean(slopes[valid]))
    if dropped:
        logger.debug(f"local_dimension: {dropped} (점, 반경) 쌍을 적합에서 제외")
    logger.info(f"local_dimension: pooled={pooled:.4f} ({int(valid.sum())}/{len(slopes)} 점)")
    return LocalDimensionEstimate(slopes, pooled, radii, dropped, int(samples.size))


def dimension_formula_gap(dimension: float, entropy: float, chi: float) -> float:
    """|HD - h/χ|"""
    if chi <= 0:
        return math.inf
    return abs(dimension - entropy / chi)
