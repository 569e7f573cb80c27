"""
역궤도 표본: natural extension 의 유한 fiber (y_0, y_1, …, y_n), f(y_{i+1}) = y_i
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from ..common.errors import DeadEndError, PreconditionError
from ..common.utils import make_rng
from ..maps import InvariantDensity, PiecewiseMap

logger = logging.getLogger(__name__)


class BackwardPolicy(str, Enum):
    UNIFORM = "uniform"
    DENSITY_WEIGHTED = "density_weighted"


@dataclass(frozen=True)
class BackwardOrbit:
    points: np.ndarray  # y_0 … y_n
    branch_indices: np.ndarray  # y_{i+1} 이 속한 분기

    @property
    def length(self) -> int:
        return int(self.branch_indices.shape[0])

    def forward_residuals(self, fmap: PiecewiseMap) -> np.ndarray:
        """|f(y_{i+1}) - y_i|"""
        out = np.empty(self.length)
        for i, idx in enumerate(self.branch_indices):
            out[i] = abs(float(fmap.branches[idx].value(self.points[i + 1])) - self.points[i])
        return out


def candidate_preimages(fmap: PiecewiseMap, y: float) -> List[Tuple[int, float]]:
    """y 의 역상 중 분기 domain 내부에 떨어지는 것만"""
    out = []
    for i, branch in enumerate(fmap.branches):
        if not branch.image.contains(y):
            continue
        w = fmap.pullback(i, y)
        if branch.domain.contains(w):
            out.append((i, w))
    return out


def _weights(fmap: PiecewiseMap, density: InvariantDensity, cands) -> np.ndarray:
    """ρ(w)/|Df(w)| 를 로그에서 정규화"""
    logs = np.array(
        [float(density.log_pdf(w)) - float(fmap.branches[i].log_abs_deriv(w)) for i, w in cands]
    )
    logs -= logs.max()
    weights = np.exp(logs)
    return weights / weights.sum()


def backward_orbit(
    fmap: PiecewiseMap,
    y0: float,
    n: int,
    policy: str = "uniform",
    seed: int = 0,
    density: Optional[InvariantDensity] = None,
) -> BackwardOrbit:
    policy = BackwardPolicy(policy)
    if policy is BackwardPolicy.DENSITY_WEIGHTED and density is None:
        if fmap.chart is None:
            raise PreconditionError(f"{fmap.name}: density_weighted 정책에는 불변밀도가 필요함")
        density = InvariantDensity(fmap.chart, fmap.ambient)

    rng = make_rng(seed)
    points = np.empty(n + 1)
    branches = np.empty(n, dtype=np.int64)
    points[0] = y = float(y0)
    for step in range(n):
        cands = candidate_preimages(fmap, y)
        if not cands:
            raise DeadEndError(f"{fmap.name}: y={y!r} 의 역상이 없음 (step {step})", step=step, point=y)
        if len(cands) == 1:
            pick = 0
        elif policy is BackwardPolicy.UNIFORM:
            pick = int(rng.integers(len(cands)))
        else:
            pick = int(rng.choice(len(cands), p=_weights(fmap, density, cands)))
        branches[step], y = cands[pick]
        points[step + 1] = y
    logger.debug(f"backward_orbit({fmap.name}, y0={y0}): {n} 스텝, policy={policy.value}")
    return BackwardOrbit(points, branches)
