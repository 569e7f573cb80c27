"""
Birkhoff 평균으로 추정하는 Lyapunov 지수 χ = ∫ log|Df| dμ
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..common.utils import make_rng
from ..maps import InvariantDensity, PiecewiseMap, generate_orbit

logger = logging.getLogger(__name__)

DEFAULT_BURN_IN = 10_000


@dataclass(frozen=True)
class LyapunovEstimate:
    chi: float
    n: int
    burn_in: int
    x0: float
    # (스텝 수, 그 시점까지의 평균): n/10 간격
    running: Tuple[Tuple[int, float], ...]


def initial_condition(
    fmap: PiecewiseMap,
    seed: int,
    density: Optional[InvariantDensity] = None,
) -> float:
    """불변밀도가 있으면 역CDF 표본, 없으면 ambient 위 균등 표본"""
    rng = make_rng(seed)
    if density is not None:
        return float(density.sample(1, rng)[0])
    lo, hi = fmap.ambient.as_tuple()
    return float(rng.uniform(lo, hi))


def birkhoff_lyapunov(
    fmap: PiecewiseMap,
    x0: float,
    n: int,
    burn_in: int = 0,
    seed: int = 0,
) -> LyapunovEstimate:
    orbit = generate_orbit(fmap, x0, burn_in + n, seed=seed, strict=True)
    logs = orbit.log_derivs[burn_in:]

    checkpoints = sorted({max(1, n * k // 10) for k in range(1, 11)})
    running = tuple((m, math.fsum(logs[:m]) / m) for m in checkpoints)
    chi = running[-1][1]
    logger.info(
        f"birkhoff_lyapunov({fmap.name}): chi={chi:.6f} (n={n}, burn_in={burn_in})",
        extra={"ctx": {"map": fmap.name, "n": n}},
    )
    return LyapunovEstimate(chi=chi, n=n, burn_in=burn_in, x0=float(x0), running=running)


def running_spread(estimate: LyapunovEstimate) -> float:
    """후반 체크포인트 평균들의 폭 (수렴 진단)"""
    tail = np.array([v for _, v in estimate.running[len(estimate.running) // 2:]])
    return float(tail.max() - tail.min()) if tail.size else 0.0
