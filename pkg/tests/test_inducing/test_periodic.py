"""주기점 열거와 |Df^k(p)| = 2^k 점검."""

import numpy as np
import pytest

from src.common.errors import PreconditionError
from src.inducing import periodic_derivative_check, periodic_points, tent_periodic_points
from src.maps import make_f_alpha, make_g_alpha, make_g_b


def test_tent_fixed_points():
    np.testing.assert_allclose(tent_periodic_points(1), [0.0, 2.0 / 3.0])


def test_tent_period_two():
    np.testing.assert_allclose(tent_periodic_points(2), [0.0, 0.4, 2.0 / 3.0, 0.8])


@pytest.mark.parametrize("k", [1, 3, 6, 10])
def test_tent_periodic_count(k):
    assert tent_periodic_points(k).size == 2 ** k


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_g_alpha_periodic_derivative(k):
    check = periodic_derivative_check(make_g_alpha(0.5), k)
    assert check.checked >= 2 ** k - 1
    assert check.max_relative_error < 1e-6


def test_f_alpha_periodic_derivative():
    check = periodic_derivative_check(make_f_alpha(1.0), 4)
    assert check.max_relative_error < 1e-6


def test_periodic_points_are_periodic():
    g = make_g_alpha(0.5)
    points = periodic_points(g, 3)
    interior = points[(points > 0.0) & (points < 1.0)]
    for p in interior:
        x = float(p)
        for _ in range(3):
            x = g.eval(x)
        assert x == pytest.approx(p, abs=1e-9)


def test_period_out_of_range():
    with pytest.raises(PreconditionError):
        tent_periodic_points(0)
    with pytest.raises(PreconditionError):
        tent_periodic_points(25)


def test_non_conjugate_map_unsupported():
    with pytest.raises(PreconditionError):
        periodic_points(make_g_b(2.0, 1.0), 2)
