import math

import numpy as np
import pytest

from cmfe_gelation.analysis import CMFEGelTimeError, crossing_time, estimate_gel_time
from cmfe_gelation.grid import build_grid
from cmfe_gelation.kernels import KernelModel

TIMES = np.linspace(0.0, 5.0, 501)


@pytest.fixture
def model():
    """Any model; the gel series are synthetic."""
    return KernelModel(sigma=0.0, gamma=0.0)


@pytest.fixture
def level(make_result, model):
    """Result on [0.1, top] whose gel mass crosses 1e-3 of N1(0) at ``crossing``."""

    def factory(top, crossing=None, level_model=None, bottom=1e-1):
        grid = build_grid(bottom, top, 1)
        g = np.zeros(grid.size)
        g[0] = 1.0 / float(grid.power_integrals(1.0)[0])
        gel = np.zeros_like(TIMES) if crossing is None else 1e-3 * TIMES / crossing
        return make_result(level_model or model, g, TIMES, grid=grid, gel_mass=gel)

    return factory


def test_crossing_time_interpolates(level):
    """Linear gel growth is located exactly."""
    assert crossing_time(level(10.0, crossing=1.234)) == pytest.approx(1.234, rel=1e-12)


def test_crossing_time_none(level):
    """No crossing without gel."""
    assert crossing_time(level(10.0)) is None


def test_estimate_extrapolates_in_inverse_log(level):
    """Crossings 1 + 2 / ln(n) extrapolate to 1."""
    tops = (1e2, 1e3, 1e4)
    results = [level(top, crossing=1.0 + 2.0 / math.log(top)) for top in tops]
    estimate = estimate_gel_time(results)
    assert estimate.detected
    assert estimate.estimate == pytest.approx(1.0, rel=1e-9)
    assert estimate.bracket == pytest.approx((1.0 + 2.0 / math.log(1e4), 1.0 + 2.0 / math.log(1e3)))
    assert estimate.top_edges == pytest.approx(tops)
    assert str(estimate).startswith("t_gel ~ 1 in [")
    assert estimate.to_dict()["detected"] is True


def test_no_gelation_detected(level):
    """The largest grid never crossing means no gelation."""
    estimate = estimate_gel_time([level(top) for top in (1e2, 1e3, 1e4)])
    assert not estimate.detected
    assert estimate.estimate is None
    assert str(estimate) == "no gelation detected"
    assert estimate.crossings == (None, None, None)


def test_too_few_levels(level):
    """Three levels are the minimum."""
    with pytest.raises(CMFEGelTimeError, match="at least 3"):
        estimate_gel_time([level(1e2, 1.5), level(1e3, 1.4)])


def test_levels_must_increase(level):
    """Top edges must grow."""
    with pytest.raises(CMFEGelTimeError, match="increase"):
        estimate_gel_time([level(1e3, 1.5), level(1e2, 1.4), level(1e4, 1.3)])


def test_levels_share_model(level):
    """Different models do not form a sweep."""
    other = KernelModel(sigma=0.1, gamma=0.0)
    with pytest.raises(CMFEGelTimeError, match="different models"):
        estimate_gel_time([level(1e2, 1.5), level(1e3, 1.4, level_model=other), level(1e4, 1.3)])


def test_levels_share_bottom_edge(level):
    """Different bottom edges do not form a sweep."""
    with pytest.raises(CMFEGelTimeError, match="bottom edges"):
        estimate_gel_time([level(1e2, 1.5), level(1e3, 1.4, bottom=1e-2), level(1e4, 1.3)])
