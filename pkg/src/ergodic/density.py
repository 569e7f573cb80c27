"""
궤도 히스토그램 밀도와 닫힌꼴 불변밀도 비교
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from ..common.errors import OrbitBreakError
from ..maps import InvariantDensity, OpenInterval, PiecewiseMap, generate_orbit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DensityEstimate:
    interval: OpenInterval
    bin_count: int
    bin_masses: np.ndarray
    samples: int
    broken_at: Optional[int] = None
    flagged_bins: Tuple[int, ...] = field(default=())

    @property
    def edges(self) -> np.ndarray:
        return self.interval.edges(self.bin_count)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[1:] + e[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        return self.bin_masses / self.widths

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.bin_masses))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"bin_center": self.centers, "density": self.density, "mass": self.bin_masses}
        )


def histogram_estimate(points: np.ndarray, interval: OpenInterval, bins: int, **extra) -> DensityEstimate:
    counts, _ = np.histogram(points, bins=interval.edges(bins))
    total = counts.sum()
    if total == 0:
        raise OrbitBreakError("히스토그램에 들어간 점이 없음", index=0)
    return DensityEstimate(interval, bins, counts / total, int(total), **extra)


def density_histogram(
    fmap: PiecewiseMap,
    x0: float,
    n: int,
    bins: int,
    seed: int = 0,
    interval: Optional[OpenInterval] = None,
) -> DensityEstimate:
    """길이 n 궤도의 히스토그램. 궤도가 끊기면 부분 히스토그램 + broken_at"""
    interval = interval or fmap.ambient
    orbit = generate_orbit(fmap, x0, n, seed=seed)
    estimate = histogram_estimate(orbit.points, interval, bins, broken_at=orbit.broken_at)
    logger.info(f"density_histogram({fmap.name}): {estimate.samples} 점, {bins} bins")
    return estimate


def exact_bin_masses(density: InvariantDensity, interval: OpenInterval, bins: int) -> np.ndarray:
    """bin 별 정확한 질량 (CDF 차) 을 interval 위에서 정규화"""
    masses = density.bin_masses(interval.edges(bins))
    return masses / masses.sum()


def compare_exact(estimate: DensityEstimate, density: InvariantDensity) -> float:
    """L1 거리 ∫|ρ̂ - ρ| = Σ |m̂_j - m_j|"""
    exact = exact_bin_masses(density, estimate.interval, estimate.bin_count)
    return float(np.sum(np.abs(estimate.bin_masses - exact)))


def min_density_on(estimate: DensityEstimate, window: OpenInterval) -> float:
    centers = estimate.centers
    inside = (centers > window.lo) & (centers < window.hi)
    return float(estimate.density[inside].min()) if inside.any() else 0.0
