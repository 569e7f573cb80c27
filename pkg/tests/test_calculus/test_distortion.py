"""Hölder 조건 / c₀ / 비율 경계 / 왜곡 반경 부등식 테스트."""

import math

import numpy as np
import pytest

from src.calculus import (
    DistortionStatus,
    HolderRegime,
    c0_constant,
    calibrate_holder_constant,
    distortion_bound_check,
    distortion_sweep,
    holder_check,
    ratio_bound_check,
)
from src.common.errors import DomainError, UndefinedPointError
from src.maps import OpenInterval, make_f_alpha, make_g_alpha, make_tent_map


@pytest.mark.parametrize(
    "C, eps, expected, tol",
    [
        (1.0, 1.0, 0.495, 1e-12),
        (10.0, 0.5, 0.0495, 1e-12),
        (0.01, 1.0, 0.6791, 1e-3),
    ],
)
def test_c0_constant(C, eps, expected, tol):
    c0 = c0_constant(C, eps)
    assert c0 == pytest.approx(expected, abs=tol)
    assert C * c0 < 0.5
    assert c0 < math.log(2.0)


def test_c0_requires_positive():
    with pytest.raises(DomainError):
        c0_constant(0.0, 1.0)


def test_holder_tent_constant_derivative():
    branch = make_tent_map().branches[0]
    small, large = holder_check(branch, C=1.0, epsilon=1.0, n_pairs=2000, seed=0)
    assert small.regime is HolderRegime.SMALL_DERIVATIVE
    assert small.max_ratio == 0.0 and small.passed
    assert large.max_ratio == 0.0 and large.passed


def test_holder_f_alpha_near_parabolic_point():
    """0 근방에서 Df_1 은 Lipschitz → 조건 (2) 통과"""
    branch = make_f_alpha(1.0).branches[0]
    small, _ = holder_check(branch, C=10.0, epsilon=1.0, n_pairs=5000, seed=1, window=OpenInterval(1e-3, 0.1))
    assert not small.regime_empty
    assert small.passed
    assert small.max_ratio < 10.0


def test_holder_f_alpha_near_cusp_calibrated():
    """cusp 근방 조건 (3), ε = 1/2: 보정 상수로 통과하고 시드 고정 시 재현"""
    branch = make_f_alpha(1.0).branches[0]
    window = OpenInterval(0.3, 0.5)
    C = calibrate_holder_constant(branch, 0.5, HolderRegime.LARGE_DERIVATIVE, n_pairs=100_000, seed=0, window=window)
    assert C > 0
    _, first = holder_check(branch, C, 0.5, n_pairs=10_000, seed=11, window=window)
    _, again = holder_check(branch, C, 0.5, n_pairs=10_000, seed=11, window=window)
    assert first.passed
    assert first == again


def test_ratio_bound_with_calibrated_constant():
    branch = make_g_alpha(0.5).branches[0]
    window = OpenInterval(0.05, 0.45)
    for regime in HolderRegime:
        C = calibrate_holder_constant(branch, 1.0, regime, n_pairs=20_000, seed=2, window=window)
        report = ratio_bound_check(branch, C, 1.0, 0.5, regime, n_pairs=20_000, seed=2, window=window)
        assert report.holds, f"{regime.value}: {report}"


def test_distortion_tent_holds_with_zero_lhs():
    result = distortion_bound_check(make_tent_map(), 0.3, 0.3 + 1e-9, c=0.1, C=1.0, epsilon=1.0)
    assert result.status is DistortionStatus.HOLDS
    assert result.lhs == 0.0


def test_distortion_g_alpha_example():
    result = distortion_bound_check(make_g_alpha(0.5), 0.4, 0.4 + 1e-6, c=0.1, C=1.0, epsilon=1.0)
    assert result.holds
    assert result.same_branch
    assert result.lhs <= result.rhs


def test_distortion_c_above_c0():
    result = distortion_bound_check(make_tent_map(), 0.3, 0.3 + 1e-9, c=0.9, C=1.0, epsilon=1.0)
    assert result.status is DistortionStatus.PRECONDITIONS_VIOLATED
    assert "c_range" in result.violated


def test_distortion_radius_precondition():
    result = distortion_bound_check(make_tent_map(), 0.3, 0.35, c=0.1, C=1.0, epsilon=1.0)
    assert result.status is DistortionStatus.PRECONDITIONS_VIOLATED
    assert result.violated == ("radius",)


def test_distortion_undefined_point():
    with pytest.raises(UndefinedPointError):
        distortion_bound_check(make_tent_map(), 0.5, 0.3, c=0.1, C=1.0, epsilon=1.0)


@pytest.mark.parametrize(
    "fmap, window",
    [(make_tent_map(), OpenInterval(0.05, 0.45)), (make_g_alpha(0.5), OpenInterval(0.05, 0.4))],
)
def test_distortion_sweep_no_failures(fmap, window):
    """보정된 C 와 c = c₀/2 로 10⁴ 개 삼중쌍: 실패 0"""
    calibrated = max(
        calibrate_holder_constant(b, 1.0, regime, n_pairs=20_000, seed=3, window=b.domain.intersect(window))
        for b in fmap.branches
        if b.domain.intersect(window) is not None
        for regime in HolderRegime
    )
    # 텐트는 Df 가 상수라 보정값이 0. 꺾임점 1/2 근처는 cusp 가 아니라 창에서 뺀다
    C = max(calibrated, 1.0)
    c = 0.5 * c0_constant(C, 1.0)
    sweep = distortion_sweep(fmap, C=C, epsilon=1.0, c=c, count=10_000, seed=4, window=window)
    assert sweep.checked > 0
    assert sweep.failures == 0
    assert sweep.checked + sweep.skipped == 10_000
