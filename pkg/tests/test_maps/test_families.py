"""tent / g_α / f_α / Chebyshev / g_b 사상 구성, 켤레 항등식, 분기 word 합성, 경계 태그 테스트."""

import math

import numpy as np
import pytest

from src.common.errors import DomainError, GeometryError, NoPreimageError, UndefinedPointError
from src.maps import (
    BoundaryTag,
    Branch,
    ConjugacyKernel,
    InvariantDensity,
    MapKind,
    OpenInterval,
    Orientation,
    PiecewiseMap,
    make_chebyshev_map,
    make_f_alpha,
    make_g_alpha,
    make_g_b,
    make_tent_map,
    tent,
    verify_boundary_tags,
)

LOG2 = math.log(2.0)
# 0.5 를 피하는 격자 (T(0.5) = 1 은 열린 구간 밖)
GRID = np.linspace(0.05, 0.95, 200)


# ─── tent ───

@pytest.mark.parametrize("x, expected", [(0.25, 0.5), (0.75, 0.5), (2.0 / 3.0, 2.0 / 3.0)])
def test_tent_values(x, expected):
    assert tent(x) == pytest.approx(expected, abs=1e-15)


def test_tent_domain():
    with pytest.raises(DomainError):
        tent(1.5)


def test_tent_map_turning_point_undefined():
    fmap = make_tent_map()
    with pytest.raises(UndefinedPointError):
        fmap.eval(0.5)
    assert fmap.eval(0.25) == 0.5
    assert fmap.log_abs_deriv(0.8) == pytest.approx(LOG2)
    assert fmap.deriv(0.8) == pytest.approx(-2.0)


def test_tent_pullback():
    fmap = make_tent_map()
    assert fmap.pullback(0, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert fmap.pullback(1, 0.5) == pytest.approx(0.75, abs=1e-15)
    assert fmap.pullback(1, 0.5, method="bisect") == pytest.approx(0.75, abs=1e-14)
    with pytest.raises(NoPreimageError):
        fmap.pullback(0, 1.5)


def test_preimages_both_branches():
    fmap = make_tent_map()
    pre = fmap.preimages(0.4)
    assert [i for i, _ in pre] == [0, 1]
    assert pre[0][1] == pytest.approx(0.2)
    assert pre[1][1] == pytest.approx(0.8)


# ─── g_α ───

@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_g_alpha_quarter_point(alpha):
    """g_α(h(1/4)) = h(T(1/4)) = h(1/2) = 1/2"""
    g = make_g_alpha(alpha)
    k = ConjugacyKernel(alpha)
    assert g.eval(k.eval(0.25)) == pytest.approx(0.5, abs=1e-12)


def test_g_alpha_kind_and_tags():
    g = make_g_alpha(1.0)
    assert g.kind is MapKind.CUSP
    assert g.boundary_tags[0] == (BoundaryTag.PLUS_INFINITY, BoundaryTag.ZERO)
    assert g.boundary_tags[1] == (BoundaryTag.ZERO, BoundaryTag.MINUS_INFINITY)


def test_g_alpha_turning_limit():
    """c = 1/2 로 다가가면 g → 1⁻"""
    g = make_g_alpha(1.0)
    values = [g.eval(0.5 - 10.0 ** -k) for k in range(1, 8)]
    assert all(v <= 1.0 for v in values)
    assert values[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(values) >= 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_g_alpha_power_law_slope(alpha):
    """0 근방에서 g_α(x) ∝ x^{2^{-α}}"""
    g = make_g_alpha(alpha)
    xs = np.geomspace(1e-16, 1e-8, 40)
    values, _ = g.eval_array(xs)
    slope = np.polyfit(np.log(xs), np.log(values), 1)[0]
    assert slope == pytest.approx(2.0 ** -alpha, abs=1e-4)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_g_alpha_conjugacy_identity(alpha):
    """g_α(h(x)) = h(T(x))"""
    g = make_g_alpha(alpha)
    k = ConjugacyKernel(alpha)
    tx = np.where(GRID < 0.5, 2.0 * GRID, 2.0 - 2.0 * GRID)
    lhs, _ = g.eval_array(k.eval(GRID))
    np.testing.assert_allclose(lhs, k.eval(tx), rtol=1e-9)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_g_alpha_chain_rule(alpha):
    """log|Dg(h(x))| = log Dh(T x) + log 2 - log Dh(x)"""
    g = make_g_alpha(alpha)
    k = ConjugacyKernel(alpha)
    tx = np.where(GRID < 0.5, 2.0 * GRID, 2.0 - 2.0 * GRID)
    _, logd = g.eval_array(k.eval(GRID))
    expected = np.asarray(k.log_deriv(tx)) + LOG2 - np.asarray(k.log_deriv(GRID))
    np.testing.assert_allclose(logd, expected, atol=1e-9, rtol=1e-9)


def test_g_alpha_pullback_round_trip():
    g = make_g_alpha(0.5)
    k = ConjugacyKernel(0.5)
    x = g.pullback(0, 0.5)
    assert x == pytest.approx(k.eval(0.25), rel=1e-12)
    assert g.eval(x) == pytest.approx(0.5, abs=1e-12)
    x_num = g.pullback(0, 0.5, method="bisect")
    assert g.eval(x_num) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("make", [make_g_alpha, make_f_alpha])
def test_central_symmetry(make):
    fmap = make(1.0)
    xs = np.linspace(0.05, 0.45, 41)
    left, _ = fmap.eval_array(xs)
    right, _ = fmap.eval_array(1.0 - xs)
    np.testing.assert_allclose(right, left, rtol=1e-9)


# ─── f_α ───

@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_f_alpha_derivative_closed_form(alpha):
    """Df_α(x) = (1 - x^α log 2)^{(-1-α)/α} (0 근방)"""
    f = make_f_alpha(alpha)
    xs = np.geomspace(1e-6, 0.1, 60)
    _, logd = f.eval_array(xs)
    expected = (1.0 - xs ** alpha * LOG2) ** ((-1.0 - alpha) / alpha)
    np.testing.assert_allclose(np.exp(logd), expected, rtol=1e-8)


def test_f_alpha_parabolic_fixed_point():
    f = make_f_alpha(1.0)
    assert f.log_abs_deriv(1e-12) == pytest.approx(0.0, abs=1e-10)
    assert f.eval(1e-12) == pytest.approx(1e-12, rel=1e-10)


def test_f_alpha_derivative_blows_up_at_cusp():
    f = make_f_alpha(1.0)
    logs = [f.log_abs_deriv(0.5 + 10.0 ** -k) for k in range(2, 11)]
    assert all(math.isfinite(v) for v in logs)
    assert np.all(np.diff(logs) > 0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_f_alpha_conjugacy_identity(alpha):
    """h(f_α(x)) = T(h(x))"""
    f = make_f_alpha(alpha)
    k = ConjugacyKernel(alpha)
    hx = np.asarray(k.eval(GRID))
    values, _ = f.eval_array(GRID)
    t_hx = np.where(hx < 0.5, 2.0 * hx, 2.0 - 2.0 * hx)
    np.testing.assert_allclose(k.eval(values), t_hx, rtol=1e-9, atol=1e-12)


# ─── Chebyshev ───

def test_chebyshev_values_and_tags():
    q = make_chebyshev_map()
    assert q.eval(0.25) == pytest.approx(0.75)
    assert q.eval(0.75) == pytest.approx(0.75)
    assert q.log_abs_deriv(0.25) == pytest.approx(math.log(2.0))
    assert q.kind is MapKind.PLAIN
    assert q.branch_count == 2


def test_chebyshev_conjugate_to_tent():
    """q(to_ambient(u)) = to_ambient(T u)"""
    q = make_chebyshev_map()
    us = np.linspace(0.02, 0.98, 49)
    us = us[np.abs(us - 0.5) > 1e-9]
    values, _ = q.eval_array(q.chart.to_ambient(us))
    expected = q.chart.to_ambient(np.array([tent(float(u)) for u in us]))
    np.testing.assert_allclose(values, expected, atol=1e-12)


def test_chebyshev_density_is_arcsine():
    q = make_chebyshev_map()
    density = InvariantDensity(q.chart, q.ambient)
    xs = np.linspace(0.01, 0.99, 25)
    np.testing.assert_allclose(density.cdf(xs), (2.0 / math.pi) * np.arcsin(np.sqrt(xs)), atol=1e-12)
    np.testing.assert_allclose(density.pdf(xs), 1.0 / (math.pi * np.sqrt(xs * (1.0 - xs))), rtol=1e-9)


def test_chebyshev_chart_slope_matches_finite_difference():
    q = make_chebyshev_map()
    us = np.array([0.1, 0.3, 0.6, 0.9])
    step = 1e-6
    numeric = (q.chart.log_jacobian(us + step) - q.chart.log_jacobian(us - step)) / (2 * step)
    np.testing.assert_allclose(q.chart.log_jacobian_slope(us), numeric, rtol=1e-5)


# ─── 분기 word 합성 ───

WORD_MAPS = [make_tent_map(), make_g_alpha(0.5), make_f_alpha(1.0), make_chebyshev_map()]


@pytest.mark.parametrize("fmap", WORD_MAPS)
def test_apply_word_matches_branch_composition(fmap):
    word = (0, 1, 1, 0, 1)
    x = fmap.pull_word(0.37, word)
    y = x
    for s in word:
        assert fmap.find_branch(y) == s
        y = float(fmap.branches[s].value(y))
    assert fmap.apply_word(x, word) == pytest.approx(y, abs=1e-9)


@pytest.mark.parametrize("fmap", WORD_MAPS)
def test_pull_word_inverts_apply_word(fmap):
    word = (1, 0, 0, 1)
    xs = np.linspace(0.1, 0.9, 9)
    pulled = np.asarray(fmap.pull_word(xs, word))
    np.testing.assert_allclose(fmap.apply_word(pulled, word), xs, atol=1e-9)
    assert isinstance(fmap.pull_word(0.4, word), float)


@pytest.mark.parametrize("fmap", WORD_MAPS)
def test_log_deriv_word_is_sum_along_word(fmap):
    word = (0, 1, 1, 0)
    x = float(fmap.pull_word(0.37, word))
    total, y = 0.0, x
    for s in word:
        total += float(fmap.branches[s].log_abs_deriv(y))
        y = float(fmap.branches[s].value(y))
    assert fmap.log_deriv_word(x, word) == pytest.approx(total, abs=1e-8)


def test_deep_word_stays_resolved_for_g_alpha():
    """깊이 40 의 셀은 앰비언트에서 언더플로하지만 텐트 좌표에서는 정확하다"""
    g = make_g_alpha(0.5)
    word = (0,) * 40
    u = g.tent_word(np.array([0.75 * 2.0 ** -40]), word)
    assert u[0] == pytest.approx(0.75)
    assert np.isfinite(g.log_deriv_word_tent(np.array([0.75 * 2.0 ** -40]), word)[0])


# ─── g_b ───

@pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
def test_g_b_flat_maximum(b):
    fmap = make_g_b(b, 1.0)
    assert float(fmap.branches[0].value(np.array(0.0))) == pytest.approx(b - 1.0)
    with pytest.raises(UndefinedPointError):
        fmap.eval(0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_g_b_log_derivative_identity(alpha):
    b = 2.0
    fmap = make_g_b(b, alpha)
    xs = np.concatenate([-np.linspace(0.95, 0.05, 19), np.linspace(0.05, 0.95, 19)])
    _, logd = fmap.eval_array(xs)
    ax = np.abs(xs)
    residual = logd + ax ** (-alpha) - (math.log(b * alpha) - (1.0 + alpha) * np.log(ax) - 1.0)
    np.testing.assert_allclose(residual, 0.0, atol=1e-10)


def test_g_b_even():
    fmap = make_g_b(1.5, 0.8)
    xs = np.linspace(0.05, 0.95, 19)
    left, _ = fmap.eval_array(-xs)
    right, _ = fmap.eval_array(xs)
    np.testing.assert_allclose(left, right, rtol=1e-15)


def test_g_b_parameter_range():
    with pytest.raises(DomainError):
        make_g_b(2.5, 1.0)
    with pytest.raises(DomainError):
        make_g_b(1.0, 0.0)


# ─── 구조 ───

def test_overlapping_domains_rejected():
    unit = OpenInterval(0.0, 1.0)
    branch = Branch(OpenInterval(0.0, 0.6), Orientation.INCREASING, lambda x: x, lambda x: 0.0 * x, unit)
    other = Branch(OpenInterval(0.5, 1.0), Orientation.INCREASING, lambda x: x, lambda x: 0.0 * x, unit)
    finite = (BoundaryTag.FINITE, BoundaryTag.FINITE)
    with pytest.raises(GeometryError):
        PiecewiseMap("bad", unit, (branch, other), (finite, finite))


def test_cusp_kind_rejects_finite_tags():
    fmap = make_tent_map()
    with pytest.raises(GeometryError):
        PiecewiseMap("bad", fmap.ambient, fmap.branches, fmap.boundary_tags, kind=MapKind.CUSP)


@pytest.mark.parametrize(
    "fmap", [make_tent_map(), make_g_alpha(0.5), make_f_alpha(1.0), make_chebyshev_map()]
)
def test_boundary_tags_verified(fmap):
    checks = verify_boundary_tags(fmap)
    assert len(checks) == 2 * fmap.branch_count
    bad = [(c.branch, c.side, c.tag.value) for c in checks if not c.ok]
    assert not bad, f"태그 추세 불일치: {bad}"
