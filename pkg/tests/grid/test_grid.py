import math

import numpy as np
import pytest

from cmfe_gelation.grid import CMFEGridError, Grid, build_grid


def test_build_grid_two_decades_one_cell_each():
    """One cell per decade on [1, 100]."""
    grid = build_grid(1, 100, 1)
    np.testing.assert_allclose(grid.edges, [1.0, 10.0, 100.0], rtol=1e-14)
    np.testing.assert_allclose(grid.pivots, [3.16228, 31.6228], rtol=1e-5)
    assert grid.size == 2
    assert grid.is_geometric


def test_build_grid_ten_cells_per_decade():
    """Ten cells on [1, 10] with edge ratio 10^0.1."""
    grid = build_grid(1, 10, 10)
    assert len(grid) == 10
    np.testing.assert_allclose(grid.edges[1:] / grid.edges[:-1], 10**0.1, rtol=1e-12)
    assert grid.bottom_edge == 1.0
    assert grid.top_edge == 10.0
    assert grid.cells_per_decade == pytest.approx(10.0)


def test_build_grid_partial_decade_rounds_up():
    """1.5 decades at 4 cells per decade needs 6 cells."""
    assert build_grid(1, 10**1.5, 4).size == 6


@pytest.mark.parametrize(
    "m_min, m_max, cells_per_decade",
    [
        (10, 1, 5),
        (1, 1, 5),
        (0, 10, 5),
        (1, 10, 0.5),
        (1, math.inf, 5),
        (1, 10, math.nan),
    ],
)
def test_build_grid_rejects_bad_arguments(m_min, m_max, cells_per_decade):
    """Inverted bounds, zero mass and sub-unit resolution are errors."""
    with pytest.raises(CMFEGridError):
        build_grid(m_min, m_max, cells_per_decade)


def test_build_grid_coag_min():
    """Cells with a pivot below the cutoff do not coagulate."""
    grid = build_grid(1e-2, 1e2, 1, coag_min=1.0)
    np.testing.assert_array_equal(grid.coagulating, [False, False, True, True])
    assert grid.coag_min == 1.0


def test_grid_coag_min_outside():
    """A cutoff off the grid is rejected."""
    with pytest.raises(CMFEGridError):
        build_grid(1, 10, 5, coag_min=100.0)


def test_grid_explicit_pivots():
    """Custom pivots must lie inside their cells."""
    grid = Grid.from_edges([0.5, 1.0, 2.0], pivots=[0.75, 1.5])
    np.testing.assert_array_equal(grid.pivots, [0.75, 1.5])
    np.testing.assert_array_equal(grid.mean_masses, [0.75, 1.5])
    np.testing.assert_array_equal(grid.widths, [0.5, 1.0])
    with pytest.raises(CMFEGridError):
        Grid.from_edges([0.5, 1.0, 2.0], pivots=[1.0, 1.5])
    with pytest.raises(CMFEGridError):
        Grid.from_edges([0.5, 1.0, 2.0], pivots=[0.75])


@pytest.mark.parametrize("edges", [[1.0], [1.0, 1.0, 2.0], [2.0, 1.0], [-1.0, 1.0], [1.0, math.nan]])
def test_grid_rejects_bad_edges(edges):
    """Fewer than two edges, non-increasing or non-positive edges."""
    with pytest.raises(CMFEGridError):
        Grid.from_edges(edges)


def test_grid_is_immutable():
    """Arrays handed out by the grid are read only."""
    grid = build_grid(1, 100, 2)
    with pytest.raises(ValueError):
        grid.edges[0] = 2.0
    with pytest.raises(ValueError):
        grid.power_integrals(1.0)[0] = 0.0


def test_grid_not_geometric():
    """Uneven edges are not geometric."""
    assert not Grid.from_edges([1.0, 2.0, 3.0]).is_geometric


@pytest.mark.parametrize(
    "p, expected",
    [
        (0.0, 1.0),
        (1.0, 1.5),
        (-1.0, math.log(2.0)),
        (2.0, 7.0 / 3.0),
        (-0.5, 2.0 * (math.sqrt(2.0) - 1.0)),
    ],
)
def test_power_integrals_single_cell(p, expected):
    """Integral of m^p over [1, 2]."""
    grid = Grid.from_edges([1.0, 2.0])
    assert grid.power_integrals(p)[0] == pytest.approx(expected, rel=1e-14)


def test_power_integrals_rejects_non_finite():
    """Infinite exponents are errors."""
    with pytest.raises(CMFEGridError):
        build_grid(1, 10, 2).power_integrals(math.inf)


@pytest.mark.parametrize("mass, expected", [(1.0, 0), (9.99, 0), (10.0, 1), (100.0, 1)])
def test_locate(mass, expected):
    """Cells are closed on the left, the top cell on both sides."""
    assert build_grid(1, 100, 1).locate(mass) == expected


@pytest.mark.parametrize("mass", [0.5, 100.5])
def test_locate_off_grid(mass):
    """Masses off the grid are errors."""
    with pytest.raises(CMFEGridError):
        build_grid(1, 100, 1).locate(mass)


def test_fingerprint():
    """Equal grids share a fingerprint, the cutoff changes it."""
    assert build_grid(1, 100, 3).fingerprint() == build_grid(1, 100, 3).fingerprint()
    assert build_grid(1, 100, 3).fingerprint() != build_grid(1, 100, 4).fingerprint()
    assert build_grid(1, 100, 3).fingerprint() != build_grid(1, 100, 3, coag_min=2.0).fingerprint()


def test_summary():
    """Summary names the size and the bounds."""
    summary = build_grid(1e-2, 1e2, 5).summary()
    assert summary["cells"] == 20
    assert summary["bottom_edge"] == 1e-2
    assert summary["top_edge"] == 1e2
    assert summary["geometric"] is True
