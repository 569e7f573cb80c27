"""
유도 full Markov 사상 구성

조각 = (W, word, returns): word 를 따라 j 번 반복했을 때의 상 W = f^j(J) 와
지금까지 U 로 귀환한 횟수. 매 깊이마다 W 를 분기 domain 으로 자르고 상을 구한다.
  - 상이 U 와 서로소      → 계속 추적
  - 상이 U 를 덮음         → 귀환. r 번째 귀환이면 U 를 word 역순으로 끌어당겨 가지 (U_i, n_i = j)
  - 상이 U 와 일부만 겹침  → 안쪽은 residual (nice U 와 full 분기라면 수치오차 수준)

chart 가 있는 사상은 텐트 좌표의 텐트 사상에서 탐색하고 (word 와 귀환 시간은 켤레로 보존)
가지 domain 만 chart 로 앰비언트에 옮긴다. 앰비언트에서 길이가 0 으로 붕괴한 가지는 residual.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, List, Optional, Tuple

import numpy as np

from ..common.errors import EmptyInducedMapError, NotRegularlyReturningError, PreconditionError
from ..common.utils import chebyshev_points
from ..maps import OpenInterval, PiecewiseMap, make_tent_map
from .returning import ReturnVerdict, is_regularly_returning

logger = logging.getLogger(__name__)

ONTO_TOL = 1e-9
MIN_PIECE = 1e-15
LAMBDA_NODES = 5
MAX_RETURN_ORDER = 8


@dataclass(frozen=True)
class InducedBranch:
    domain: OpenInterval
    return_time: int
    word: Tuple[int, ...]
    tent_domain: Optional[OpenInterval] = None


@dataclass(frozen=True)
class LevelStats:
    depth: int
    branch_count: int
    kac_sum: float
    residual: float
    lambda_min: float


@dataclass(frozen=True)
class InducedMarkovMap:
    fmap: PiecewiseMap
    U: OpenInterval
    branches: Tuple[InducedBranch, ...]
    residual_measure: float
    lambda_min: float
    max_depth: int
    return_order: int = 1
    levels: Tuple[LevelStats, ...] = field(default=())
    components: Tuple[Tuple[int, OpenInterval], ...] = field(default=())

    @property
    def branch_count(self) -> int:
        return len(self.branches)

    @property
    def kac_sum(self) -> float:
        return math.fsum(b.return_time * b.domain.length for b in self.branches)

    @property
    def return_times(self) -> List[int]:
        return sorted(b.return_time for b in self.branches)

    def branch_index(self, x: float) -> Optional[int]:
        for i, b in enumerate(self.branches):
            if b.domain.contains(x):
                return i
        return None

    def apply(self, x: float) -> float:
        """φ(x) = f^{n_i}(x)"""
        i = self.branch_index(x)
        if i is None:
            raise PreconditionError(f"x={x!r} 는 유도 사상의 가지 밖", point=x)
        return self.fmap.apply_word(x, self.branches[i].word)


def pull_endpoint(fmap: PiecewiseMap, index: int, y: float) -> float:
    """분기 index 로 y 를 끌어당긴다. 상의 끝점이면 domain 끝점(한쪽 극한)으로"""
    branch = fmap.branches[index]
    if branch.image.contains(y):
        return fmap.pullback(index, y)
    at_lo = abs(y - branch.limit_at_lo()) <= abs(y - branch.limit_at_hi())
    return branch.domain.lo if at_lo else branch.domain.hi


def pull_interval(fmap: PiecewiseMap, word: Tuple[int, ...], target: OpenInterval) -> OpenInterval:
    if fmap.chart is not None:
        a, b = (float(v) for v in fmap.pull_word(np.array(target.as_tuple()), word))
        return OpenInterval(min(a, b), max(a, b))
    lo, hi = target.lo, target.hi
    for symbol in reversed(word):
        a, b = pull_endpoint(fmap, symbol, lo), pull_endpoint(fmap, symbol, hi)
        lo, hi = min(a, b), max(a, b)
    return OpenInterval(lo, hi)


def _snap(value: float, U: OpenInterval) -> float:
    if abs(value - U.lo) < ONTO_TOL:
        return U.lo
    if abs(value - U.hi) < ONTO_TOL:
        return U.hi
    return value


def branch_lambda(fmap: PiecewiseMap, branch: InducedBranch) -> float:
    """가지 위 Chebyshev 노드에서의 min log|Dφ| (word 를 따라 합성, 비유한 값은 제외)"""
    if branch.tent_domain is not None and fmap.chart is not None:
        nodes = chebyshev_points(branch.tent_domain.lo, branch.tent_domain.hi, LAMBDA_NODES)
        values = np.asarray(fmap.log_deriv_word_tent(nodes, branch.word), dtype=float)
    else:
        nodes = chebyshev_points(branch.domain.lo, branch.domain.hi, LAMBDA_NODES)
        values = np.asarray(fmap.log_deriv_word(nodes, branch.word), dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        logger.warning(f"{fmap.name}: 가지 {branch.domain.as_tuple()} 에서 유한한 log|Dφ| 가 없음")
        return math.inf
    return float(finite.min())


class _Builder:
    def __init__(self, fmap: PiecewiseMap, U: OpenInterval, max_depth: int, order: int, track: bool):
        self.fmap = fmap
        self.U = U
        self.max_depth = max_depth
        self.order = order
        self.track = track
        # 탐색 좌표
        if fmap.chart is not None and not fmap.chart.is_identity:
            self.search = make_tent_map()
            self.search_U = OpenInterval(*(float(fmap.chart.from_ambient(v)) for v in U.as_tuple()))
        else:
            self.search, self.search_U = fmap, U
        self.branches: List[InducedBranch] = []
        self.components: List[Tuple[int, OpenInterval]] = []
        self.levels: List[LevelStats] = []
        self.lost = 0.0
        self.log_lambda = math.inf

    def _ambient(self, J: OpenInterval) -> Optional[OpenInterval]:
        """탐색 좌표 구간 → 앰비언트 구간 (붕괴하면 None)"""
        if self.search is self.fmap:
            return J
        lo, hi = (float(v) for v in self.fmap.chart.to_ambient(np.array(J.as_tuple())))
        return OpenInterval(lo, hi) if lo < hi else None

    def _split(self, W: OpenInterval):
        """W 를 U 바깥 왼쪽/오른쪽 조각으로"""
        U = self.search_U
        out = []
        if W.lo < U.lo - ONTO_TOL:
            out.append(OpenInterval(W.lo, min(W.hi, U.lo)))
        if W.hi > U.hi + ONTO_TOL:
            out.append(OpenInterval(max(W.lo, U.hi), W.hi))
        return out

    def _record(self, depth: int, word: Tuple[int, ...], returns: int, queue: Deque) -> None:
        component = pull_interval(self.search, word, self.search_U)
        ambient = self._ambient(component)
        if self.track and ambient is not None:
            self.components.append((depth, ambient))
        if returns < self.order:
            queue.append((self.search_U, word, returns))
            return
        if ambient is None:
            logger.debug(f"depth {depth}: 가지 {word} 가 앰비언트에서 붕괴 → residual")
            return
        tent_domain = component if self.fmap.chart is not None else None
        branch = InducedBranch(ambient, depth, word, tent_domain)
        self.branches.append(branch)
        self.log_lambda = min(self.log_lambda, branch_lambda(self.fmap, branch))

    def run(self) -> None:
        U = self.search_U
        pieces: Deque = deque([(U, (), 0)])
        for depth in range(1, self.max_depth + 1):
            nxt: Deque = deque()
            while pieces:
                W, word, returns = pieces.popleft()
                for idx, branch in enumerate(self.search.branches):
                    part = W.intersect(branch.domain)
                    if part is None or part.length < MIN_PIECE:
                        continue
                    image = branch.image_of(part)
                    if image is None:
                        continue
                    lo, hi = _snap(image.lo, U), _snap(image.hi, U)
                    if not lo < hi:
                        continue
                    image = OpenInterval(lo, hi)
                    w2 = word + (idx,)
                    if image.disjoint(U, tol=ONTO_TOL):
                        nxt.append((image, w2, returns))
                        continue
                    for outside in self._split(image):
                        nxt.append((outside, w2, returns))
                    if image.lo <= U.lo + ONTO_TOL and image.hi >= U.hi - ONTO_TOL:
                        self._record(depth, w2, returns + 1, nxt)
                    else:
                        inside = image.intersect(U)
                        if inside is not None:
                            piece = self._ambient(pull_interval(self.search, w2, inside))
                            lost = piece.length if piece is not None else 0.0
                            self.lost += lost
                            logger.warning(f"depth {depth}: 부분 귀환 조각 (길이 {lost:.3g}) 을 residual 로")
            pieces = nxt
            covered = math.fsum(b.domain.length for b in self.branches)
            kac = math.fsum(b.return_time * b.domain.length for b in self.branches)
            lam = math.exp(self.log_lambda) if self.branches else math.nan
            self.levels.append(LevelStats(depth, len(self.branches), kac, self.U.length - covered, lam))
            logger.debug(f"depth {depth}: {len(self.branches)} 가지, 추적 조각 {len(pieces)}")
            if not pieces:
                break


def build_induced(
    fmap: PiecewiseMap,
    U: OpenInterval,
    max_depth: int = 12,
    return_order: int = 1,
    track_components: bool = False,
    horizon: int = 1000,
) -> InducedMarkovMap:
    """U 위의 r 번째 귀환 유도 사상. λ_min ≤ 1 이면 r 을 두 배로 올려 재시도"""
    if return_order < 1:
        raise PreconditionError(f"return_order 는 1 이상이어야 함 (got {return_order})")
    check = is_regularly_returning(fmap, U, horizon)
    if check.verdict is ReturnVerdict.NO:
        raise NotRegularlyReturningError(
            f"{fmap.name}: U={U.as_tuple()} 는 regularly returning 이 아님",
            witness=check.witness,
            boundary_point=check.boundary_point,
        )

    order = return_order
    while True:
        builder = _Builder(fmap, U, max_depth, order, track_components)
        builder.run()
        if not builder.branches:
            raise EmptyInducedMapError(
                f"{fmap.name}: depth {max_depth} 까지 가지를 찾지 못함 (r={order})",
                max_depth=max_depth,
            )
        lam = math.exp(builder.log_lambda)
        if lam > 1.0 or order * 2 > MAX_RETURN_ORDER:
            break
        logger.info(f"{fmap.name}: λ_min={lam:.4f} ≤ 1 → r={order * 2} 로 재구성")
        order *= 2

    if lam <= 1.0:
        logger.warning(f"{fmap.name}: r={order} 에서도 λ_min={lam:.4f} ≤ 1")
    branches = tuple(sorted(builder.branches, key=lambda b: b.domain.lo))
    residual = U.length - math.fsum(b.domain.length for b in branches)
    imm = InducedMarkovMap(
        fmap=fmap,
        U=U,
        branches=branches,
        residual_measure=residual,
        lambda_min=lam,
        max_depth=max_depth,
        return_order=order,
        levels=tuple(builder.levels),
        components=tuple(builder.components),
    )
    logger.info(
        f"build_induced({fmap.name}): {imm.branch_count} 가지, kac={imm.kac_sum:.5f}, "
        f"residual={residual:.3g}, λ_min={lam:.4f}"
    )
    return imm


# ─── 통계 ───

@dataclass(frozen=True)
class InducedHolderReport:
    """|Dφ(x) - Dφ(x')| ≤ C |φ(x) - φ(x')|^ε 의 최대 비율 (상 쪽 조건)"""
    max_ratio: float
    epsilon: float
    witness: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class MarkovStats:
    kac_sum: float
    residual_measure: float
    lambda_min: float
    holder: InducedHolderReport


def induced_holder(imm: InducedMarkovMap, epsilon: float = 1.0, nodes: int = 9) -> InducedHolderReport:
    best, witness = 0.0, None
    for branch in imm.branches:
        xs = chebyshev_points(branch.domain.lo, branch.domain.hi, nodes)
        phi = np.asarray(imm.fmap.apply_word(xs, branch.word), dtype=float)
        sign = np.prod([imm.fmap.branches[s].sign for s in branch.word])
        dphi = sign * np.exp(np.asarray(imm.fmap.log_deriv_word(xs, branch.word), dtype=float))
        for a in range(nodes):
            for b in range(a + 1, nodes):
                gap = abs(phi[a] - phi[b]) ** epsilon
                if gap == 0.0:
                    continue
                ratio = abs(dphi[a] - dphi[b]) / gap
                if ratio > best:
                    best, witness = ratio, (float(xs[a]), float(xs[b]))
    return InducedHolderReport(best, epsilon, witness)


def markov_stats(imm: InducedMarkovMap, epsilon: float = 1.0) -> MarkovStats:
    return MarkovStats(
        kac_sum=imm.kac_sum,
        residual_measure=imm.residual_measure,
        lambda_min=imm.lambda_min,
        holder=induced_holder(imm, epsilon),
    )


def nested_or_disjoint(components, tol: float = 1e-12) -> bool:
    """모든 쌍이 포함 관계이거나 서로소인지"""
    items = [c for _, c in components]
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            if a.disjoint(b, tol=tol):
                continue
            if a.contains_interval(b, tol=tol) or b.contains_interval(a, tol=tol):
                continue
            return False
    return True
