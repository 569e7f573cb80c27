"""
Regularly returning (nice) 구간 판정: f^n(∂U) ∩ U = ∅ (n > 0)
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from ..maps import OpenInterval, PiecewiseMap

logger = logging.getLogger(__name__)

PERIOD_TOL = 1e-12
INSIDE_TOL = 1e-12
DEFAULT_HORIZON = 1000


class ReturnVerdict(str, Enum):
    YES_CERTIFIED = "yes_certified"
    YES_UP_TO_HORIZON = "yes_up_to_horizon"
    NO = "no"


@dataclass(frozen=True)
class ReturnCheck:
    verdict: ReturnVerdict
    witness: Optional[int] = None  # NO 일 때 처음 U 에 들어간 n
    boundary_point: Optional[float] = None

    @property
    def returning(self) -> bool:
        return self.verdict is not ReturnVerdict.NO


def _strictly_inside(U: OpenInterval, x: float) -> bool:
    return U.lo + INSIDE_TOL < x < U.hi - INSIDE_TOL


def _boundary_orbit(fmap: PiecewiseMap, U: OpenInterval, p: float, horizon: int):
    """(certified, witness): 주기 검출 또는 궤도 끊김이면 certified"""
    seen: List[float] = [p]
    x = p
    for n in range(1, horizon + 1):
        idx = fmap.find_branch(x)
        if idx is None:
            # 정의되지 않는 점 → 탈출로 간주
            return True, None
        x = float(fmap.branches[idx].value(x))
        if _strictly_inside(U, x):
            return False, n
        if any(abs(x - q) < PERIOD_TOL for q in seen):
            return True, None
        seen.append(x)
    return False, None


def is_regularly_returning(
    fmap: PiecewiseMap,
    U: OpenInterval,
    horizon: int = DEFAULT_HORIZON,
) -> ReturnCheck:
    certified = True
    for p in (U.lo, U.hi):
        ok, witness = _boundary_orbit(fmap, U, p, horizon)
        if witness is not None:
            logger.info(f"{fmap.name}: U={U.as_tuple()} 는 nice 가 아님 (f^{witness}({p}) ∈ U)")
            return ReturnCheck(ReturnVerdict.NO, witness, p)
        certified = certified and ok
    verdict = ReturnVerdict.YES_CERTIFIED if certified else ReturnVerdict.YES_UP_TO_HORIZON
    return ReturnCheck(verdict)
