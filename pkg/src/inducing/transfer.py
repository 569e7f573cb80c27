"""
전달 연산자: 유도 사상의 acip (Ulam 근사), 원래 사상으로의 측도 퍼뜨리기,
ambient 전달 연산자 한 스텝.

모든 밀도는 bin 별 질량 벡터(piecewise-constant)로 다룬다.
역분기 합성은 PiecewiseMap.pull_word (chart 가 있으면 텐트 좌표) 로 하고,
닫힌꼴 역함수가 없는 사상은 정방향 격자를 np.interp 로 뒤집는다.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..common.errors import NumericalError
from ..ergodic.density import DensityEstimate
from ..maps import OpenInterval, PiecewiseMap
from .builder import InducedBranch, InducedMarkovMap

logger = logging.getLogger(__name__)

TRANSFER_BINS = 512
SPREAD_BINS = 1024
MAX_SWEEPS = 1000
SWEEP_TOL = 1e-10
FALLBACK_GRID = 64


@dataclass(frozen=True)
class TransferResult:
    estimate: DensityEstimate
    converged: bool
    iterations: int
    last_change: float
    escaped_mass: float


# ─── 역분기 평가 ───

def _has_inverses(fmap: PiecewiseMap, word) -> bool:
    return all(fmap.branches[s].inverse is not None for s in word)


def _forward(fmap: PiecewiseMap, word, xs: np.ndarray) -> np.ndarray:
    return np.asarray(fmap.apply_word(np.asarray(xs, dtype=float), word), dtype=float)


def _word_sign(fmap: PiecewiseMap, word) -> float:
    return float(np.prod([fmap.branches[s].sign for s in word])) if word else 1.0


def pull_points(fmap: PiecewiseMap, word, domain: OpenInterval, ys: np.ndarray) -> np.ndarray:
    """(f^{len(word)}|_domain)^{-1}(ys): ys 는 domain 상의 내부 점"""
    ys = np.asarray(ys, dtype=float)
    if not word:
        return ys.copy()
    if fmap.chart is not None or _has_inverses(fmap, word):
        return np.asarray(fmap.pull_word(ys, word), dtype=float)
    grid = np.linspace(domain.lo, domain.hi, FALLBACK_GRID + 1)
    images = _forward(fmap, word, grid)
    order = np.argsort(images)
    return np.interp(ys, images[order], grid[order])


def _image_of(fmap: PiecewiseMap, word, domain: OpenInterval) -> Tuple[float, float]:
    ends = np.array([domain.lo, domain.hi])
    a, b = (float(v) for v in _forward(fmap, word, ends))
    return (a, b) if a <= b else (b, a)


# ─── 유도 사상의 acip ───

def _branch_rows(imm: InducedMarkovMap, branch: InducedBranch, edges: np.ndarray, widths: np.ndarray):
    """가지 하나의 Ulam 행렬 기여: (domain bin 번호, 행 블록)"""
    fmap, U = imm.fmap, imm.U
    interior = np.clip(edges, U.lo, U.hi)
    pre = pull_points(fmap, branch.word, branch.domain, interior[1:-1])
    pre = np.concatenate([[branch.domain.lo], pre, [branch.domain.hi]])
    if _word_sign(fmap, branch.word) < 0:
        pre = np.concatenate([[branch.domain.hi], pre[1:-1], [branch.domain.lo]])
    lo_k = np.minimum(pre[:-1], pre[1:])
    hi_k = np.maximum(pre[:-1], pre[1:])

    j_lo = max(int(np.searchsorted(edges, branch.domain.lo, side="right")) - 1, 0)
    j_hi = min(int(np.searchsorted(edges, branch.domain.hi, side="left")), len(widths))
    rows = np.arange(j_lo, j_hi)
    overlap = np.minimum(edges[rows + 1][:, None], hi_k[None, :]) - np.maximum(edges[rows][:, None], lo_k[None, :])
    block = np.clip(overlap, 0.0, None) / widths[rows][:, None]
    return rows, block


def ulam_matrix(imm: InducedMarkovMap, bins: int = TRANSFER_BINS) -> np.ndarray:
    """P[j, k] = |B_j ∩ φ^{-1}(B_k)| / |B_j|"""
    edges = imm.U.edges(bins)
    widths = np.diff(edges)
    P = np.zeros((bins, bins))
    for branch in imm.branches:
        rows, block = _branch_rows(imm, branch, edges, widths)
        P[rows] += block
    return P


def transfer_density(
    imm: InducedMarkovMap,
    bins: int = TRANSFER_BINS,
    iterations: int = MAX_SWEEPS,
    tol: float = SWEEP_TOL,
) -> TransferResult:
    """Ulam 근사 전달 연산자를 반복해 φ 의 불변밀도를 구한다"""
    P = ulam_matrix(imm, bins)
    mass = np.full(bins, 1.0 / bins)
    change = math.inf
    escaped = 0.0
    sweeps = 0
    for sweeps in range(1, iterations + 1):
        pushed = mass @ P
        total = pushed.sum()
        escaped = 1.0 - total
        pushed /= total
        change = float(np.abs(pushed - mass).sum())
        mass = pushed
        if change < tol:
            break
    converged = change < tol
    if not converged:
        logger.warning(f"transfer_density: {iterations} 회 안에 수렴하지 않음 (L1 변화 {change:.3g})")
    logger.info(f"transfer_density: {sweeps} sweeps, escaped={escaped:.3g}")
    estimate = DensityEstimate(imm.U, bins, mass, samples=0)
    return TransferResult(estimate, converged, sweeps, change, escaped)


# ─── 측도 퍼뜨리기 ───

def _cdf_from_masses(estimate: DensityEstimate):
    edges = estimate.edges
    cumulative = np.concatenate([[0.0], np.cumsum(estimate.bin_masses)])

    def cdf(x):
        return np.interp(x, edges, cumulative)

    return cdf


def _pushed_cumulative(
    fmap: PiecewiseMap,
    branch: InducedBranch,
    steps: int,
    cdf,
    edges: np.ndarray,
) -> Tuple[np.ndarray, List[int]]:
    """G(e) = ν({x ∈ U_i : f^steps(x) ≤ e}), e = ambient edges"""
    word = branch.word[:steps]
    dom = branch.domain
    lo, hi = _image_of(fmap, word, dom)
    m_lo, m_hi = float(cdf(dom.lo)), float(cdf(dom.hi))
    total = m_hi - m_lo
    G = np.where(edges <= lo, 0.0, total)
    inside = (edges > lo) & (edges < hi)
    flagged: List[int] = []
    if inside.any():
        x = pull_points(fmap, word, dom, edges[inside])
        x = np.clip(x, dom.lo, dom.hi)
        part = cdf(x) - m_lo if _word_sign(fmap, word) > 0 else m_hi - cdf(x)
        G[inside] = part
    elif total > 0 and lo == hi:
        # 상이 한 점으로 붕괴: 질량은 보존하고 bin 에 표시
        k = int(np.clip(np.searchsorted(edges, lo) - 1, 0, len(edges) - 2))
        flagged.append(k)
    return G, flagged


def spread_measure(
    imm: InducedMarkovMap,
    nu: DensityEstimate,
    bins: int = SPREAD_BINS,
    interval: Optional[OpenInterval] = None,
) -> DensityEstimate:
    """Σ_i Σ_{j<n_i} f^j_*(ν|U_i) 를 ambient bin 으로 모아 정규화"""
    interval = interval or imm.fmap.ambient
    edges = interval.edges(bins)
    cdf = _cdf_from_masses(nu)
    masses = np.zeros(bins)
    flagged: List[int] = []
    for branch in imm.branches:
        for j in range(branch.return_time):
            G, flags = _pushed_cumulative(imm.fmap, branch, j, cdf, edges)
            masses += np.diff(G)
            flagged.extend(flags)
    total = masses.sum()
    if total <= 0:
        raise NumericalError("spread_measure: 퍼뜨린 질량이 0")
    if flagged:
        logger.warning(f"spread_measure: {len(set(flagged))} bin 에 한 점으로 붕괴한 조각")
    logger.info(f"spread_measure: ν-Kac 합 {total:.6f}, {bins} bins")
    return DensityEstimate(interval, bins, masses / total, samples=0, flagged_bins=tuple(sorted(set(flagged))))


def ambient_transfer_step(fmap: PiecewiseMap, estimate: DensityEstimate) -> DensityEstimate:
    """(Lν)(B_k) = Σ_b ν(b^{-1}(B_k)) 를 한 번 적용"""
    edges = estimate.edges
    cdf = _cdf_from_masses(estimate)
    masses = np.zeros(estimate.bin_count)
    for idx, branch in enumerate(fmap.branches):
        clipped = np.clip(edges, branch.image.lo, branch.image.hi)
        inside = (clipped > branch.image.lo) & (clipped < branch.image.hi)
        pre = np.where(
            clipped <= branch.image.lo,
            branch.domain.lo if branch.sign > 0 else branch.domain.hi,
            branch.domain.hi if branch.sign > 0 else branch.domain.lo,
        )
        if inside.any():
            if branch.inverse is not None:
                pre[inside] = np.asarray(branch.inverse(clipped[inside]), dtype=float)
            else:
                pre[inside] = [fmap.pullback(idx, float(y)) for y in clipped[inside]]
        masses += np.abs(np.diff(cdf(pre)))
    total = masses.sum()
    return DensityEstimate(estimate.interval, estimate.bin_count, masses / total, samples=0)


def transfer_invariance_error(fmap: PiecewiseMap, estimate: DensityEstimate) -> float:
    stepped = ambient_transfer_step(fmap, estimate)
    return float(np.abs(stepped.bin_masses - estimate.bin_masses).sum())
