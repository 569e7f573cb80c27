"""
텐트 사상의 첫 귀환 가지를 유리수로 전수 열거하는 기준 구현.

길이 n 의 모든 itinerary w 에 대해 J = T_w^{-1}(U) 를 정확히 계산하고
J ⊆ U, 0 < m < n 에서 T^m(J) ∩ U = ∅ 인 것만 고른다.
"""

from fractions import Fraction
from itertools import product
from typing import List, Tuple

HALF = Fraction(1, 2)

OracleBranch = Tuple[Fraction, Fraction, int]


def _inverse(symbol: int, y: Fraction) -> Fraction:
    return y * HALF if symbol == 0 else 1 - y * HALF


def _pull(word: Tuple[int, ...], lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    for symbol in reversed(word):
        a, b = _inverse(symbol, lo), _inverse(symbol, hi)
        lo, hi = min(a, b), max(a, b)
    return lo, hi


def _disjoint(a: Fraction, b: Fraction, lo: Fraction, hi: Fraction) -> bool:
    return b <= lo or a >= hi


def brute_force_first_returns(lo: Fraction, hi: Fraction, depth: int) -> List[OracleBranch]:
    """(J.lo, J.hi, n) 목록 (J.lo 오름차순)"""
    found: List[OracleBranch] = []
    for n in range(1, depth + 1):
        for word in product((0, 1), repeat=n):
            j_lo, j_hi = _pull(word, lo, hi)
            if not (lo <= j_lo and j_hi <= hi):
                continue
            # T^m(J) = T_{w[m:]}^{-1}(U)
            if all(_disjoint(*_pull(word[m:], lo, hi), lo, hi) for m in range(1, n)):
                found.append((j_lo, j_hi, n))
    return sorted(found)
