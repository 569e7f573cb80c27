"""역궤도를 따른 구간 pullback: 길이 감소와 왜곡 누적합."""

import math

import numpy as np
import pytest

from src.common.errors import PreconditionError
from src.extension import backward_orbit, pullback_interval
from src.maps import InvariantDensity, OpenInterval, make_chebyshev_map, make_g_alpha, make_tent_map

LOG2 = math.log(2.0)


def test_tent_lengths_halve_without_distortion():
    tent = make_tent_map()
    orbit = backward_orbit(tent, 0.3, 10, seed=2)
    trace = pullback_interval(tent, orbit, radius=0.1)
    expected = 0.2 * 2.0 ** -np.arange(11)
    np.testing.assert_allclose(trace.lengths, expected, rtol=1e-9)
    assert np.all(trace.distortion_partial_sums == 0.0)
    assert trace.shrink_events == 0
    assert trace.slope == pytest.approx(-LOG2, rel=1e-9)


def test_intervals_contain_backward_points():
    g = make_g_alpha(0.5)
    orbit = backward_orbit(g, 0.4, 15, seed=3)
    trace = pullback_interval(g, orbit, radius=0.05)
    for (lo, hi), y in zip(trace.intervals, orbit.points):
        assert lo <= y <= hi


def _density_weighted_traces(distortion_budget=None):
    """g_0.5, density_weighted 역궤도 길이 60, 반경 min(0.05, edge/2), 20 개 시드"""
    g = make_g_alpha(0.5)
    density = InvariantDensity(g.chart, g.ambient)
    rng = np.random.default_rng(17)
    traces = []
    for i in range(20):
        y0 = float(density.sample(1, rng)[0])
        orbit = backward_orbit(g, y0, 60, policy="density_weighted", seed=i, density=density)
        edge = min(y0 - g.ambient.lo, g.ambient.hi - y0)
        radius = min(0.05, 0.5 * edge)
        traces.append(pullback_interval(g, orbit, radius=radius, distortion_budget=distortion_budget))
    return traces


def test_g_alpha_slopes_track_lyapunov():
    """분기 경계만으로 줄이는 기본 모드: chart 사상은 full 분기라 반경이 그대로 유지된다"""
    traces = _density_weighted_traces()
    within = 0
    for trace in traces:
        assert trace.shrink_events == 0
        assert trace.radius == trace.requested_radius
        assert trace.distortion_partial_sums[0] == 0.0
        assert np.all(np.diff(trace.distortion_partial_sums) >= 0.0)
        assert np.all(np.isfinite(trace.lengths)) and np.all(trace.lengths > 0.0)
        if abs(trace.slope + LOG2) <= 0.05:
            within += 1
    assert within >= 18


def test_budget_overrun_is_reported_not_shrunk():
    for trace in _density_weighted_traces():
        sums = trace.distortion_partial_sums
        if trace.budget_overrun_at is None:
            assert sums[-1] < LOG2
            assert trace.within_budget
        else:
            k = trace.budget_overrun_at
            assert sums[k] >= LOG2
            assert np.all(sums[:k] < LOG2)
        assert trace.budget_shrinks == 0


def test_distortion_budget_realises_admissible_radius():
    """예산 log 2 를 주면 누적합 < log 2 가 될 때까지 반경을 반으로 줄인다"""
    traces = _density_weighted_traces(distortion_budget=LOG2)
    within = 0
    for trace in traces:
        assert trace.distortion_partial_sums[-1] < LOG2
        assert trace.within_budget
        assert trace.shrink_events == trace.budget_shrinks
        assert trace.radius == pytest.approx(trace.requested_radius * 0.5 ** trace.shrink_events)
        if abs(trace.slope + LOG2) <= 0.05:
            within += 1
    assert within >= 18
    assert any(t.budget_shrinks > 0 for t in traces)


def test_tent_budget_never_shrinks():
    tent = make_tent_map()
    orbit = backward_orbit(tent, 0.3, 30, seed=4)
    trace = pullback_interval(tent, orbit, radius=0.1, distortion_budget=LOG2)
    assert trace.shrink_events == 0
    assert trace.budget_overrun_at is None


def test_chebyshev_lengths_follow_chart_jacobian():
    """선형 영역의 앰비언트 길이 = exp(J(u))·텐트 폭"""
    q = make_chebyshev_map()
    orbit = backward_orbit(q, 0.3, 40, seed=5)
    trace = pullback_interval(q, orbit, radius=0.05)
    u = q.chart.from_ambient(orbit.points[-1])
    tent_width = trace.lengths[-1] / np.exp(q.chart.log_jacobian(u))
    first = q.chart.from_ambient(0.35) - q.chart.from_ambient(0.25)
    assert tent_width == pytest.approx(first * 2.0 ** -40, rel=1e-4)
    assert trace.slope == pytest.approx(-LOG2, abs=0.1)


def test_non_positive_budget_rejected():
    tent = make_tent_map()
    orbit = backward_orbit(tent, 0.3, 3, seed=0)
    with pytest.raises(PreconditionError):
        pullback_interval(tent, orbit, radius=0.1, distortion_budget=0.0)


def test_radius_from_interval():
    tent = make_tent_map()
    orbit = backward_orbit(tent, 0.3, 3, seed=0)
    trace = pullback_interval(tent, orbit, V=OpenInterval(0.25, 0.4))
    assert trace.lengths[0] == pytest.approx(0.1)


@pytest.mark.parametrize("kwargs", [{"radius": 0.0}, {"radius": 0.5}, {"V": OpenInterval(0.5, 0.6)}])
def test_invalid_neighbourhood(kwargs):
    tent = make_tent_map()
    orbit = backward_orbit(tent, 0.3, 3, seed=0)
    with pytest.raises(PreconditionError):
        pullback_interval(tent, orbit, **kwargs)
