"""
Checks of simulated trajectories against the a-priori estimates and the
qualitative properties of the solution.
"""

from dataclasses import dataclass
from logging import getLogger
from typing import List, Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from cmfe_gelation.analysis.estimates import AprioriReport
from cmfe_gelation.analysis.exceptions import CMFEHypothesisError
from cmfe_gelation.analysis.verdicts import BoundVerdict, compare
from cmfe_gelation.integrator import SimulationResult
from cmfe_gelation.scheme import CoagTable, precompute_coag_table

LOG = getLogger(__name__)

# relative tolerance for edges that coincide with delta
_EDGE_SLACK = 1e-12


def apriori_check(result: SimulationResult, apriori: AprioriReport, tolerance: float = 0.0) -> BoundVerdict:
    """
    Uniform bound: ``N_{-2 sigma}(t) + N1(t) <= A(T)`` at every record up to ``T``.
    """
    mask = result.times <= apriori.horizon
    values = result.moments["Nm_2sigma"][mask] + result.moments["N1"][mask]
    return compare("uniform_bound", values, np.full(values.shape, apriori.a), tolerance)


@dataclass(frozen=True)
class CollisionIntegrals:  # pylint: disable=too-many-instance-attributes
    """
    Running time integrals, one value per record.

    ``large`` and ``total`` are the collision integrals ``sum C N_i N_j`` over
    pairs of cells above ``lambda_cut`` and over all pairs. ``large_growth``,
    ``small_singular`` and ``unit_growth`` integrate the squares of
    ``sum G N`` above ``lambda_cut``, ``sum m^-sigma N`` below one and
    ``sum G N`` from one up.
    """

    times: np.ndarray
    lambda_cut: float
    large: np.ndarray
    total: np.ndarray
    large_growth: np.ndarray
    small_singular: np.ndarray
    unit_growth: np.ndarray
    k1: float = 1.0

    def verdicts(self, apriori: AprioriReport, tolerance: float = 0.05) -> List[BoundVerdict]:
        """Compare the integrals up to ``apriori.horizon`` with ``A_dagger`` and ``A_dagger_total``."""
        mask = self.times <= apriori.horizon
        pairs = (
            ("collisions_large", self.large, apriori.a_dagger),
            ("collisions_total", self.total, apriori.a_dagger_total),
            ("growth_large", self.large_growth, apriori.a_dagger / self.k1),
            ("singular_small", self.small_singular, apriori.a_dagger_total / self.k1),
            ("growth_unit", self.unit_growth, apriori.a_dagger_total / self.k1),
        )
        points = int(np.count_nonzero(mask))
        return [compare(name, values[mask], np.full(points, bound), tolerance) for name, values, bound in pairs]


def collision_integrals(
    result: SimulationResult, lambda_cut: float, table: Optional[CoagTable] = None
) -> CollisionIntegrals:
    """
    Time-integrated collision sums of a trajectory, trapezoidal over the records.

    :param result: Simulated trajectory.
    :param lambda_cut: Mass above which cells count as large.
    :param table: Coagulation table of the run, rebuilt if not given.
    :rtype: CollisionIntegrals
    """
    grid, model = result.grid, result.model
    if table is None:
        table = precompute_coag_table(grid, model)
    numbers = result.densities * grid.widths
    pivots = grid.pivots
    large = pivots > lambda_cut
    growth = np.asarray(model.growth(pivots), dtype=float)

    total = np.einsum("ki,ij,kj->k", numbers, table.rate, numbers)
    large_sum = np.einsum("ki,ij,kj->k", numbers[:, large], table.rate[np.ix_(large, large)], numbers[:, large])
    large_growth = (numbers[:, large] @ growth[large]) ** 2
    small = pivots < 1.0
    small_singular = (numbers[:, small] @ pivots[small] ** (-model.sigma)) ** 2
    unit_growth = (numbers[:, ~small] @ growth[~small]) ** 2

    return CollisionIntegrals(
        times=result.times,
        lambda_cut=float(lambda_cut),
        large=cumulative_trapezoid(large_sum, result.times, initial=0.0),
        total=cumulative_trapezoid(total, result.times, initial=0.0),
        large_growth=cumulative_trapezoid(large_growth, result.times, initial=0.0),
        small_singular=cumulative_trapezoid(small_singular, result.times, initial=0.0),
        unit_growth=cumulative_trapezoid(unit_growth, result.times, initial=0.0),
        k1=model.k1,
    )


def singular_moment_monotonicity(result: SimulationResult, p: float, tolerance: float = 1e-9) -> BoundVerdict:
    """
    Without fragmentation ``N_{-p}(t) <= I_p``, the initial singular moment.

    :raises CMFEHypothesisError: If the model fragments.
    """
    if result.model.fragments:
        raise CMFEHypothesisError("Singular moments only decrease without fragmentation")
    series = result.moment_series(-float(p))
    return compare(f"singular_moment_{p:g}", series, np.full(series.shape, series[0]), tolerance)


def mass_monotonicity(result: SimulationResult, tolerance: float = 1e-12) -> BoundVerdict:
    """``N1`` does not increase between consecutive records."""
    n1 = result.moments["N1"]
    if n1.size < 2:
        return BoundVerdict("mass_monotonicity", True, 0.0, 0)
    return compare("mass_monotonicity", n1[1:], n1[:-1], tolerance)


def support_gap_preserved(result: SimulationResult, delta: float) -> BoundVerdict:
    """
    Cells lying entirely below ``delta`` stay empty.

    ``max_ratio`` is the largest density found in those cells, zero when the
    gap is preserved. Only coagulation-only runs are expected to keep it.
    """
    gap = result.grid.edges[1:] <= delta * (1.0 + _EDGE_SLACK)
    worst = float(np.max(result.densities[:, gap], initial=0.0))
    hypotheses = not result.model.fragments
    if worst > 0 and hypotheses:
        LOG.warning("Density %.3g appeared below delta=%g", worst, delta)
    return BoundVerdict("support_gap", worst == 0.0, worst, int(result.times.size), hypotheses)
