"""반복 도함수, Richardson 차분, C^r 조건 테스트."""

import math

import numpy as np
import pytest

from src.calculus import cr_ratio_check, log_deriv_iterate, richardson_derivative
from src.common.errors import OrbitBreakError
from src.maps import iterate, make_f_alpha, make_g_alpha, make_tent_map

LOG2 = math.log(2.0)


def test_tent_iterate_derivative():
    assert log_deriv_iterate(make_tent_map(), 0.3, 10) == pytest.approx(10 * LOG2, rel=1e-15)


def test_g_alpha_iterate_matches_product():
    g = make_g_alpha(0.5)
    x, total = 0.3, 0.0
    for _ in range(3):
        total += math.log(abs(g.deriv(x)))
        x = g.eval(x)
    assert log_deriv_iterate(g, 0.3, 3) == pytest.approx(total, abs=1e-10)


def test_iterate_derivative_additive():
    g = make_g_alpha(0.5)
    x = 0.3
    whole = log_deriv_iterate(g, x, 7)
    split = log_deriv_iterate(g, x, 3) + log_deriv_iterate(g, iterate(g, x, 3), 4)
    assert whole == pytest.approx(split, abs=1e-9)


def test_turning_point_breaks():
    with pytest.raises(OrbitBreakError) as exc:
        log_deriv_iterate(make_tent_map(), 0.5, 2)
    assert exc.value.index == 0


def test_richardson_second_derivative_of_polynomial():
    assert richardson_derivative(lambda x: x ** 3, 0.7, 1e-3, 2) == pytest.approx(6 * 0.7, rel=1e-8)
    assert richardson_derivative(np.sin, 0.3, 1e-3, 1) == pytest.approx(math.cos(0.3), rel=1e-10)


def test_cr_tent_passes():
    grid = np.linspace(0.01, 0.99, 99)
    report = cr_ratio_check(make_tent_map(), r=3, p=2.0, C=1e-9, grid=grid)
    assert report.passed
    assert report.max_small == 0.0 and report.max_large == 0.0
    assert report.checked > 90


def test_cr_f_alpha_bounded_near_zero():
    grid = np.geomspace(1e-4, 0.1, 30)
    report = cr_ratio_check(make_f_alpha(1.0), r=2, p=3.0, C=10.0, grid=grid)
    assert report.passed
    assert report.checked == 30
    # D²f_1 = 2 log 2 · (1 - x log 2)^{-3}
    assert 2 * LOG2 < report.max_small < 2 * LOG2 * 1.3


def test_cr_f_alpha_bounded_near_cusp():
    grid = 0.5 - 2.0 ** -np.arange(3, 21)
    report = cr_ratio_check(make_f_alpha(1.0), r=2, p=3.0, C=1e3, grid=grid)
    assert report.checked >= 10
    assert math.isfinite(report.max_large)
    assert report.passed


def test_cr_skips_points_outside_branches():
    report = cr_ratio_check(make_tent_map(), r=2, p=2.0, C=1.0, grid=[0.5, 0.25])
    assert report.skipped == 1
    assert report.checked == 1
