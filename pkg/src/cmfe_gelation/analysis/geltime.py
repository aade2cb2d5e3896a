"""
Gelation time from a truncation refinement sweep.

For each top edge ``n`` the crossing time ``t*(n)`` is when the gel mass first
exceeds ``tolerance * N1(0)``. The crossing times are fitted linearly in
``1 / ln(n)`` and the intercept is the estimate for an untruncated system.
"""

import json
import math
from dataclasses import dataclass
from logging import getLogger
from typing import Optional, Sequence, Tuple

import numpy as np

from cmfe_gelation.analysis.exceptions import CMFEGelTimeError
from cmfe_gelation.integrator import SimulationResult

LOG = getLogger(__name__)

DEFAULT_GEL_TOLERANCE = 1e-3
MIN_LEVELS = 3


@dataclass(frozen=True)
class GelTimeEstimate:
    """
    :param detected: False when the largest grid never crossed the threshold.
    :param estimate: Extrapolated gel time, ``None`` if not detected.
    :param bracket: Smallest and largest of the last two crossing times.
    :param top_edges: Top edge of each level.
    :param crossings: Crossing time per level, ``None`` where it was not reached.
    :param tolerance: Gel mass threshold as a fraction of the initial mass.
    """

    detected: bool
    estimate: Optional[float]
    bracket: Optional[Tuple[float, float]]
    top_edges: Tuple[float, ...]
    crossings: Tuple[Optional[float], ...]
    tolerance: float = DEFAULT_GEL_TOLERANCE

    def __str__(self):
        if not self.detected:
            return "no gelation detected"
        return f"t_gel ~ {self.estimate:.6g} in [{self.bracket[0]:.6g}, {self.bracket[1]:.6g}]"

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return {
            "detected": self.detected,
            "estimate": self.estimate,
            "bracket": None if self.bracket is None else list(self.bracket),
            "top_edges": list(self.top_edges),
            "crossings": list(self.crossings),
            "tolerance": self.tolerance,
        }


def crossing_time(result: SimulationResult, tolerance: float = DEFAULT_GEL_TOLERANCE) -> Optional[float]:
    """
    First time the gel mass exceeds ``tolerance * N1(0)``, linearly
    interpolated between records. ``None`` if it never does.
    """
    threshold = tolerance * result.n1_initial
    gel = result.ledger["gel_mass"]
    above = np.nonzero(gel > threshold)[0]
    if above.size == 0:
        return None
    index = int(above[0])
    if index == 0:
        return float(result.times[0])
    t0, t1 = result.times[index - 1], result.times[index]
    g0, g1 = gel[index - 1], gel[index]
    return float(t0 + (threshold - g0) / (g1 - g0) * (t1 - t0))


def _check_nested(results: Sequence[SimulationResult]):
    if len(results) < MIN_LEVELS:
        raise CMFEGelTimeError(f"Need at least {MIN_LEVELS} refinement levels, got {len(results)}")
    reference = results[0]
    model = json.dumps(reference.model.to_dict(), sort_keys=True)
    initial = json.dumps(reference.initial, sort_keys=True)
    for result in results[1:]:
        if json.dumps(result.model.to_dict(), sort_keys=True) != model:
            raise CMFEGelTimeError("Refinement levels use different models")
        if json.dumps(result.initial, sort_keys=True) != initial:
            raise CMFEGelTimeError("Refinement levels use different initial data")
        if not math.isclose(result.grid.bottom_edge, reference.grid.bottom_edge, rel_tol=1e-12):
            raise CMFEGelTimeError("Refinement levels start at different bottom edges")
    tops = [result.grid.top_edge for result in results]
    if tops[0] <= 1:
        raise CMFEGelTimeError(f"Top edges must exceed 1, got {tops[0]}")
    if any(high <= low for low, high in zip(tops, tops[1:])):
        raise CMFEGelTimeError(f"Top edges must increase, got {tops}")


def estimate_gel_time(
    results: Sequence[SimulationResult], tolerance: float = DEFAULT_GEL_TOLERANCE
) -> GelTimeEstimate:
    """
    Extrapolate the gel time from runs on increasing top edges.

    :param results: At least three runs with the same model and initial data on
        grids with the same bottom edge and increasing top edges.
    :param tolerance: Gel mass threshold as a fraction of the initial mass.
    :rtype: GelTimeEstimate
    :raises CMFEGelTimeError: If the runs do not form a refinement sequence.
    """
    _check_nested(results)
    tops = tuple(result.grid.top_edge for result in results)
    crossings = tuple(crossing_time(result, tolerance) for result in results)
    if crossings[-1] is None:
        LOG.info("No gelation detected up to t=%g on top edge %g", results[-1].final_time, tops[-1])
        return GelTimeEstimate(False, None, None, tops, crossings, tolerance)

    detected = [(top, crossing) for top, crossing in zip(tops, crossings) if crossing is not None]
    x = np.array([1.0 / math.log(top) for top, _ in detected])
    y = np.array([crossing for _, crossing in detected])
    if x.size >= 2:
        _, intercept = np.polyfit(x, y, 1)
        estimate = float(intercept)
    else:
        estimate = float(y[-1])
    last = y[-2:]
    bracket = (float(np.min(last)), float(np.max(last)))
    LOG.info("Gel time estimate %.6g, last crossings in [%.6g, %.6g]", estimate, *bracket)
    return GelTimeEstimate(True, estimate, bracket, tops, crossings, tolerance)
