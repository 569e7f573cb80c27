"""
단어 수 엔트로피: 분할 itinerary 의 서로 다른 n-단어 수로 h_μ 를 추정.

(1/n)·log #{n-words} 는 위상적 추정량이라 측도가 최대엔트로피가 아니면 위에서 접근한다.
블록 엔트로피 H_n - H_{n-1} (경험 분포의 Shannon 엔트로피 차) 도 함께 제공한다.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..common.errors import GeometryError, PreconditionError
from ..common.utils import make_rng
from ..maps import OpenInterval, PiecewiseMap, generate_orbit

logger = logging.getLogger(__name__)

BOUNDARY_NUDGE = 1e-12
CHUNK_ROWS = 65_536


@dataclass(frozen=True)
class WordCountEntropy:
    rates: Tuple[Tuple[int, float], ...]
    word_counts: Tuple[Tuple[int, int], ...]
    perturbations: int
    orbit_length: int

    def rate(self, n: int) -> float:
        return dict(self.rates)[n]


def binary_entropy(p: float) -> float:
    """H(p) = -p log p - (1-p) log(1-p)"""
    if not (0.0 < p < 1.0):
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


def partition_symbols(points: np.ndarray, partition: Sequence[OpenInterval]) -> Tuple[np.ndarray, int]:
    """각 점이 속한 분할 원소 번호와 경계 섭동 횟수"""
    order = sorted(range(len(partition)), key=lambda i: partition[i].lo)
    los = np.array([partition[i].lo for i in order])
    his = np.array([partition[i].hi for i in order])
    labels = np.array(order, dtype=np.int64)

    def locate(xs: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(los, xs, side="right") - 1
        clipped = np.clip(pos, 0, len(los) - 1)
        ok = (pos >= 0) & (xs > los[clipped]) & (xs < his[clipped])
        return np.where(ok, clipped, -1)

    xs = np.asarray(points, dtype=float)
    idx = locate(xs)
    missing = idx < 0
    perturbations = int(missing.sum())
    if perturbations:
        for nudge in (BOUNDARY_NUDGE, -BOUNDARY_NUDGE):
            retry = idx < 0
            if not retry.any():
                break
            idx[retry] = locate(xs[retry] + nudge)
        if np.any(idx < 0):
            bad = float(xs[idx < 0][0])
            raise GeometryError(f"점 {bad!r} 가 분할 어디에도 속하지 않음", point=bad)
        logger.warning(f"분할 경계 위 점 {perturbations}개를 {BOUNDARY_NUDGE:g} 만큼 섭동")
    return labels[idx], perturbations


def _word_codes(symbols: np.ndarray, n: int, alphabet: int) -> np.ndarray:
    if alphabet ** n >= 2 ** 62:
        raise PreconditionError(f"단어 길이 {n} 이 알파벳 {alphabet} 에 비해 너무 김")
    windows = sliding_window_view(symbols.astype(np.int64), n)
    powers = alphabet ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return windows @ powers


def word_count_rates(
    symbols: np.ndarray,
    word_lengths: Sequence[int],
    alphabet: Optional[int] = None,
    perturbations: int = 0,
) -> WordCountEntropy:
    symbols = np.asarray(symbols)
    alphabet = alphabet or int(symbols.max()) + 1
    alphabet = max(alphabet, 2)
    rates, counts = [], []
    for n in word_lengths:
        if n < 1 or n > len(symbols):
            raise PreconditionError(f"단어 길이 {n} 이 itinerary 길이 {len(symbols)} 와 맞지 않음")
        distinct = int(np.unique(_word_codes(symbols, n, alphabet)).size)
        counts.append((int(n), distinct))
        rates.append((int(n), math.log(distinct) / n))
        logger.debug(f"word count n={n}: {distinct} 단어, rate={math.log(distinct) / n:.5f}")
    return WordCountEntropy(tuple(rates), tuple(counts), perturbations, int(len(symbols)))


def block_entropy(symbols: np.ndarray, n: int, alphabet: Optional[int] = None) -> float:
    """경험적 n-블록 Shannon 엔트로피 H_n (nats)"""
    symbols = np.asarray(symbols)
    alphabet = max(alphabet or int(symbols.max()) + 1, 2)
    _, freq = np.unique(_word_codes(symbols, n, alphabet), return_counts=True)
    prob = freq / freq.sum()
    return float(-np.sum(prob * np.log(prob)))


def block_entropy_rate(symbols: np.ndarray, n: int, alphabet: Optional[int] = None) -> float:
    """조건부 엔트로피 H_n - H_{n-1}"""
    if n < 2:
        return block_entropy(symbols, 1, alphabet)
    return block_entropy(symbols, n, alphabet) - block_entropy(symbols, n - 1, alphabet)


def orbit_itinerary(
    fmap: PiecewiseMap,
    partition: Sequence[OpenInterval],
    x0: float,
    N: int,
    seed: int = 0,
) -> Tuple[np.ndarray, int]:
    orbit = generate_orbit(fmap, x0, N, seed=seed)
    if not orbit.complete:
        logger.warning(f"{fmap.name}: itinerary 가 {orbit.length}/{N} 에서 끊김")
    return partition_symbols(orbit.points, partition)


def entropy_word_count(
    fmap: PiecewiseMap,
    partition: Sequence[OpenInterval],
    N: int,
    word_lengths: Sequence[int],
    x0: float,
    seed: int = 0,
) -> WordCountEntropy:
    symbols, perturbations = orbit_itinerary(fmap, partition, x0, N, seed)
    result = word_count_rates(symbols, word_lengths, alphabet=len(partition), perturbations=perturbations)
    logger.info(f"entropy_word_count({fmap.name}): {dict(result.rates)}")
    return result


# ─── Bernoulli 원천 ───

def bernoulli_itinerary(p: float, N: int, seed: int = 0) -> np.ndarray:
    """P(1) = p 인 i.i.d. 0/1 기호열"""
    if not (0.0 < p < 1.0):
        raise PreconditionError(f"p 는 (0, 1) 안이어야 함 (got {p!r})")
    rng = make_rng(seed)
    return (rng.random(N) < p).astype(np.int64)


def _cylinder_midpoints(symbols: np.ndarray) -> np.ndarray:
    """텐트 역분기 (y/2, 1 - y/2) 를 마지막 기호부터 적용해 원통의 중점을 얻는다"""
    x = np.full(symbols.shape[0], 0.5)
    for col in range(symbols.shape[1] - 1, -1, -1):
        s = symbols[:, col]
        x = np.where(s == 0, 0.5 * x, 1.0 - 0.5 * x)
    return x


def _bernoulli_points(p: float, depth: int, count: int, rng: np.random.Generator) -> np.ndarray:
    chunks = []
    for start in range(0, count, CHUNK_ROWS):
        rows = min(CHUNK_ROWS, count - start)
        symbols = (rng.random((rows, depth)) < p).astype(np.int8)
        chunks.append(_cylinder_midpoints(symbols))
    return np.concatenate(chunks) if chunks else np.empty(0)


def sample_bernoulli_measure(p: float, depth: int, count: int, seed: int = 0) -> np.ndarray:
    """텐트 부호화의 Bernoulli(p) 측도 표본"""
    if depth < 40:
        raise PreconditionError(f"depth 는 40 이상이어야 함 (got {depth})")
    if not (0.0 < p < 1.0):
        raise PreconditionError(f"p 는 (0, 1) 안이어야 함 (got {p!r})")
    return _bernoulli_points(p, depth, count, make_rng(seed))


def bernoulli_sampler(p: float, depth: int = 50) -> Callable[[int, np.random.Generator], np.ndarray]:
    """local_dimension 용 (count, rng) → 표본 함수"""

    def sample(count: int, rng: np.random.Generator) -> np.ndarray:
        return _bernoulli_points(p, depth, count, rng)

    return sample
