"""ball-mass 회귀로 추정하는 국소 차원 테스트."""

import math

import numpy as np
import pytest

from src.common.errors import PreconditionError
from src.common.utils import make_rng
from src.ergodic import (
    ball_fractions,
    bernoulli_sampler,
    binary_entropy,
    dimension_formula_gap,
    geometric_radii,
    local_dimension,
)
from src.maps import ConjugacyKernel, InvariantDensity, make_g_alpha

RADII = geometric_radii(1e-7, 1e-1, 13)
EXPECTED_BERNOULLI = binary_entropy(0.3) / math.log(2.0)


def _points(sampler, count=50, seed=99):
    return sampler(count, make_rng(seed))


def _uniform(count, rng):
    return rng.random(count)


def test_ball_fractions_counts_closed_balls():
    samples = np.array([0.1, 0.2, 0.3, 0.4])
    fractions = ball_fractions(np.array([0.2]), samples, np.array([0.1, 0.05]))
    assert fractions[0, 0] == pytest.approx(0.75)
    assert fractions[0, 1] == pytest.approx(0.25)


def test_lebesgue_dimension_one():
    points = np.linspace(0.2, 0.8, 50)
    est = local_dimension(points, _uniform, RADII, sample_count=200_000, seed=1)
    assert est.pooled == pytest.approx(1.0, abs=0.03)
    assert est.sample_count == 200_000


def test_bernoulli_dimension():
    sampler = bernoulli_sampler(0.3)
    est = local_dimension(_points(sampler), sampler, RADII, sample_count=1_000_000, seed=2)
    assert est.pooled == pytest.approx(EXPECTED_BERNOULLI, abs=0.03)


def test_bernoulli_dimension_through_chart():
    """Lipschitz-bi-Lipschitz 가 아닌 켤레를 거쳐도 국소 차원은 보존된다"""
    kernel = ConjugacyKernel(0.5)
    inner = bernoulli_sampler(0.3)

    def sampler(count, rng):
        return np.asarray(kernel.eval(inner(count, rng)), dtype=float)

    est = local_dimension(_points(sampler), sampler, RADII, sample_count=1_000_000, seed=3)
    assert est.pooled == pytest.approx(EXPECTED_BERNOULLI, abs=0.03)


def test_acip_dimension_one():
    g = make_g_alpha(0.5)
    density = InvariantDensity(g.chart, g.ambient)
    est = local_dimension(_points(density.sample), density.sample, RADII, sample_count=500_000, seed=4)
    assert est.pooled == pytest.approx(1.0, abs=0.03)


def test_radii_must_span_four_decades():
    with pytest.raises(PreconditionError):
        local_dimension([0.5], _uniform, geometric_radii(1e-3, 1e-1, 5), sample_count=1000)


def test_dimension_formula_gap():
    h = binary_entropy(0.3)
    assert dimension_formula_gap(h / math.log(2.0), h, math.log(2.0)) == pytest.approx(0.0, abs=1e-15)
    assert dimension_formula_gap(1.0, 0.5, 0.0) == math.inf
