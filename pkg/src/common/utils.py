"""
공통 유틸리티: 시드 파생, 설정 해시, Chebyshev 탐침점
"""

import hashlib
import json
import logging
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)


def canonical_json(payload: Any) -> str:
    """정렬된 키 + 공백 없는 JSON (해시 입력용)"""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True, default=str)


def canonical_hash(payload: Any) -> str:
    """canonical JSON 의 sha256 hex"""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def derive_seed(base_seed: int, *params: Any) -> int:
    """(base seed, 파라미터...) → 64-bit 작업 시드.

    sweep 의 작업별 시드. 실행 순서/스레드 수와 무관하게 같은 값을 준다.
    """
    digest = hashlib.sha256(canonical_json([int(base_seed), list(params)]).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) % (2**64))


def chebyshev_points(lo: float, hi: float, count: int = 17) -> np.ndarray:
    """(lo, hi) 안의 Chebyshev 1종 노드 (끝점 제외, 오름차순)"""
    k = np.arange(count)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * count))[::-1]
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
