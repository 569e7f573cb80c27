"""유도 사상 acip (Ulam) 와 원래 사상으로의 퍼뜨리기."""

import numpy as np
import pytest

from src.ergodic import compare_exact
from src.inducing import (
    InducedBranch,
    InducedMarkovMap,
    build_induced,
    spread_measure,
    transfer_density,
    transfer_invariance_error,
    ulam_matrix,
)
from src.maps import (
    BoundaryTag,
    Branch,
    InvariantDensity,
    OpenInterval,
    Orientation,
    PiecewiseMap,
    make_g_alpha,
    make_tent_map,
)

U = OpenInterval(0.4, 0.8)


@pytest.fixture(scope="module")
def tent_induced():
    return build_induced(make_tent_map(), U, max_depth=14)


def test_ulam_rows_are_substochastic(tent_induced):
    P = ulam_matrix(tent_induced, bins=64)
    rows = P.sum(axis=1)
    assert np.all(rows <= 1.0 + 1e-9)
    assert rows.mean() > 0.99


def test_tent_induced_density_uniform(tent_induced):
    result = transfer_density(tent_induced, bins=128)
    assert result.converged
    uniform = np.full(128, 1.0 / 128)
    assert np.abs(result.estimate.bin_masses - uniform).sum() < 0.01
    assert result.escaped_mass < 0.01


def test_tent_spread_matches_lebesgue(tent_induced):
    tent = make_tent_map()
    nu = transfer_density(tent_induced, bins=256).estimate
    spread = spread_measure(tent_induced, nu, bins=100)
    assert spread.total_mass == pytest.approx(1.0)
    assert compare_exact(spread, InvariantDensity(tent.chart, tent.ambient)) < 0.02
    assert transfer_invariance_error(tent, spread) < 0.02


@pytest.fixture(scope="module")
def g_induced():
    g = make_g_alpha(0.5)
    lo, hi = g.chart.to_ambient(np.array([0.4, 0.8]))
    return build_induced(g, OpenInterval(float(lo), float(hi)), max_depth=14)


def test_g_alpha_induced_density_is_restricted_acip(g_induced):
    """유도 사상의 acip = μ|_U / μ(U)"""
    g = g_induced.fmap
    density = InvariantDensity(g.chart, g.ambient)
    result = transfer_density(g_induced, bins=256)
    expected = density.bin_masses(g_induced.U.edges(256))
    expected = expected / expected.sum()
    assert np.abs(result.estimate.bin_masses - expected).sum() < 0.05


def test_g_alpha_spread_matches_exact_density(g_induced):
    g = g_induced.fmap
    nu = transfer_density(g_induced, bins=256).estimate
    spread = spread_measure(g_induced, nu, bins=100)
    assert compare_exact(spread, InvariantDensity(g.chart, g.ambient)) < 0.06
    assert transfer_invariance_error(g, spread) < 0.08


def test_single_branch_induced_map():
    """가지 하나짜리 퇴화 유도 사상: 한 스텝 전달은 역상 길이를 그대로 준다"""
    unit = OpenInterval(0.0, 1.0)
    square = Branch(
        unit,
        Orientation.INCREASING,
        lambda x: np.asarray(x, dtype=float) ** 2,
        lambda x: np.log(2.0 * np.asarray(x, dtype=float)),
        unit,
        np.sqrt,
    )
    fmap = PiecewiseMap("square", unit, (square,), ((BoundaryTag.ZERO, BoundaryTag.FINITE),))
    imm = InducedMarkovMap(
        fmap, unit, (InducedBranch(unit, 1, (0,)),), residual_measure=0.0, lambda_min=0.0, max_depth=1
    )
    assert imm.kac_sum == pytest.approx(1.0)
    result = transfer_density(imm, bins=64, iterations=1)
    edges = unit.edges(64)
    np.testing.assert_allclose(result.estimate.bin_masses, np.diff(np.sqrt(edges)), atol=1e-12)
    assert result.escaped_mass == pytest.approx(0.0, abs=1e-12)
