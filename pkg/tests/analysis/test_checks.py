import numpy as np
import pytest

from cmfe_gelation.analysis import (
    AprioriReport,
    CMFEHypothesisError,
    apriori_check,
    collision_integrals,
    mass_monotonicity,
    singular_moment_monotonicity,
    support_gap_preserved,
)
from cmfe_gelation.grid import build_grid
from cmfe_gelation.kernels import KernelModel
from cmfe_gelation.scheme import precompute_coag_table


def _apriori(a=10.0, a_dagger=1.0, a_dagger_total=100.0, horizon=1.0):
    return AprioriReport(
        horizon=horizon, lambda_cut=2.0, k2=4.0, a1=a - 2.0, a=a, a_dagger=a_dagger, a_dagger_total=a_dagger_total
    )


def test_apriori_check(make_result):
    """N_{-2 sigma} + N1 against A up to the horizon only."""
    model = KernelModel(sigma=0.0, gamma=0.0)
    g = np.full(20, 0.02)
    result = make_result(model, np.vstack([g, g, 50.0 * g]), [0.0, 1.0, 2.0])
    expected = result.moments["Nm_2sigma"][0] + result.moments["N1"][0]

    verdict = apriori_check(result, _apriori(a=10.0, horizon=1.0))
    assert verdict.holds
    assert verdict.points == 2
    assert verdict.max_ratio == pytest.approx(expected / 10.0)

    assert not apriori_check(result, _apriori(a=10.0, horizon=2.0)).holds


def test_collision_integrals_constant_density(make_result, mixed_model):
    """Integrals of a frozen density grow linearly in time."""
    grid = build_grid(1e-1, 1e1, 10)
    g = np.linspace(0.1, 0.2, grid.size)
    result = make_result(mixed_model, g, [0.0, 0.5, 2.0], grid=grid)
    table = precompute_coag_table(grid, mixed_model)
    integrals = collision_integrals(result, lambda_cut=2.0, table=table)

    numbers = g * grid.widths
    large = grid.pivots > 2.0
    total = numbers @ table.rate @ numbers
    large_total = numbers[large] @ table.rate[np.ix_(large, large)] @ numbers[large]
    np.testing.assert_allclose(integrals.total, [0.0, 0.5 * total, 2.0 * total], rtol=1e-12)
    np.testing.assert_allclose(integrals.large, [0.0, 0.5 * large_total, 2.0 * large_total], rtol=1e-12)
    assert integrals.small_singular[-1] > 0
    assert integrals.unit_growth[-1] > 0


def test_collision_verdicts(make_result, mixed_model):
    """Five verdicts, large-pair integral first."""
    result = make_result(mixed_model, np.full(20, 0.01), [0.0, 0.5, 1.0, 2.0])
    verdicts = collision_integrals(result, lambda_cut=2.0).verdicts(_apriori(a_dagger=1e6, a_dagger_total=1e6))
    assert [verdict.name for verdict in verdicts] == [
        "collisions_large",
        "collisions_total",
        "growth_large",
        "singular_small",
        "growth_unit",
    ]
    assert all(verdict.holds for verdict in verdicts)
    assert all(verdict.points == 3 for verdict in verdicts)


def test_support_gap(make_result):
    """Density below delta breaks the gap."""
    model = KernelModel(sigma=0.0, gamma=0.0)
    grid = build_grid(1e-2, 1e2, 1)
    kept = make_result(model, [0.0, 0.0, 1.0, 1.0], [0.0, 1.0], grid=grid)
    assert support_gap_preserved(kept, 1.0).holds

    broken = make_result(model, np.array([[0.0, 0.0, 1.0, 1.0], [0.0, 1e-9, 1.0, 1.0]]), [0.0, 1.0], grid=grid)
    verdict = support_gap_preserved(broken, 1.0)
    assert not verdict.holds
    assert verdict.max_ratio == 1e-9


def test_mass_monotonicity(make_result):
    """N1 may not grow between records."""
    model = KernelModel(sigma=0.0, gamma=0.0)
    g = np.full(20, 0.01)
    assert mass_monotonicity(make_result(model, np.vstack([g, 0.9 * g]), [0.0, 1.0])).holds
    assert not mass_monotonicity(make_result(model, np.vstack([g, 1.1 * g]), [0.0, 1.0])).holds
    assert mass_monotonicity(make_result(model, g, [0.0])).points == 0


def test_singular_moment_monotonicity(make_result, product_model, mixed_model):
    """Singular moments may only fall without breakup."""
    g = np.full(20, 0.01)
    assert singular_moment_monotonicity(make_result(product_model, np.vstack([g, 0.5 * g]), [0.0, 1.0]), 0.5).holds
    with pytest.raises(CMFEHypothesisError):
        singular_moment_monotonicity(make_result(mixed_model, g, [0.0, 1.0]), 0.5)
