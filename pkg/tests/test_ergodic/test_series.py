"""무한 Lyapunov 지수 급수 부분합 테스트."""

import math

import numpy as np
import pytest

from src.common.errors import DomainError
from src.ergodic import Verdict, infinite_exponent_series


def test_divergent_below_half():
    result = infinite_exponent_series(0.4, 0.3)
    assert result.verdict is Verdict.DIVERGENT
    assert result.ratio == pytest.approx(1.25)
    assert math.isinf(result.lower_limit)
    assert result.lower[-1] > 1e10


def test_half_is_divergent_with_linear_partial_sums():
    result = infinite_exponent_series(0.5, 0.3, terms=50)
    assert result.verdict is Verdict.DIVERGENT
    steps = np.diff(result.lower)
    np.testing.assert_allclose(steps, steps[0], rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.6, 0.7, 0.9])
def test_convergent_above_half(alpha):
    result = infinite_exponent_series(alpha, 0.3)
    assert result.verdict is Verdict.CONVERGENT
    assert result.lower[-1] == pytest.approx(result.lower_limit, abs=1e-10)
    assert result.upper[-1] == pytest.approx(result.upper_limit, abs=1e-10)


def test_terms_are_positive_and_ordered():
    """(α-1)·log p > 0 이고 하한 항 = 상한 항 / α"""
    result = infinite_exponent_series(0.7, 0.3, N=2, terms=20)
    assert result.lower[0] > 0.0
    assert np.all(result.upper <= result.lower)
    assert result.lower[0] == pytest.approx(-0.3 * math.log(0.3) / 0.7 / 8.0)


@pytest.mark.parametrize("alpha, p", [(0.0, 0.3), (1.0, 0.3), (0.5, 0.0), (0.5, 1.0)])
def test_domain_errors(alpha, p):
    with pytest.raises(DomainError):
        infinite_exponent_series(alpha, p)
