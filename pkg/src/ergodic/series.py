"""
무한 Lyapunov 급수: 하한/상한 부분합과 발산 판정.

항: 하한 (α-1)·log p·α^{-(i+1)}·2^{-(i+N+1)}, 상한 (α-1)·log p·α^{-i}·2^{-(i+N+1)}.
공비 1/(2α) 라서 α ≤ 1/2 이면 발산.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..common.errors import DomainError
from .integrability import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesResult:
    alpha: float
    p: float
    N: int
    ratio: float
    lower: np.ndarray
    upper: np.ndarray
    verdict: Verdict
    lower_limit: float
    upper_limit: float


def infinite_exponent_series(alpha: float, p: float, N: int = 0, terms: int = 200) -> SeriesResult:
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha 는 (0, 1) 안이어야 함 (got {alpha!r})", alpha=alpha)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p 는 (0, 1) 안이어야 함 (got {p!r})", p=p)
    if N < 0 or terms < 1:
        raise DomainError(f"N ≥ 0, terms ≥ 1 이어야 함 (N={N}, terms={terms})")

    ratio = 1.0 / (2.0 * alpha)
    scale = (alpha - 1.0) * math.log(p) * 2.0 ** -(N + 1)
    i = np.arange(terms, dtype=float)
    geometric = ratio ** i
    lower_terms = scale / alpha * geometric
    upper_terms = scale * geometric
    lower = np.cumsum(lower_terms)
    upper = np.cumsum(upper_terms)

    if ratio >= 1.0:
        verdict = Verdict.DIVERGENT
        lower_limit = upper_limit = math.inf
    else:
        verdict = Verdict.CONVERGENT
        lower_limit = lower_terms[0] / (1.0 - ratio)
        upper_limit = upper_terms[0] / (1.0 - ratio)
    logger.info(f"series(alpha={alpha}): ratio={ratio:.6f} → {verdict.value}")
    return SeriesResult(alpha, p, N, ratio, lower, upper, verdict, float(lower_limit), float(upper_limit))
