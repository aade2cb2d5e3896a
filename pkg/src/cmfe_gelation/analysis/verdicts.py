"""Outcome records of the checks run against simulated trajectories."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BoundVerdict:
    """
    :param name: What was checked.
    :param holds: True if the simulated quantity stays below the bound.
    :param max_ratio: Largest ratio of simulated value to bound, zero if nothing was compared.
    :param points: Number of recorded times compared.
    :param hypotheses: True if the model meets the hypotheses the bound is derived under.
    """

    name: str
    holds: bool
    max_ratio: float
    points: int
    hypotheses: bool = True

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return {
            "name": self.name,
            "holds": self.holds,
            "max_ratio": self.max_ratio,
            "points": self.points,
            "hypotheses": self.hypotheses,
        }


def compare(name: str, values, bounds, tolerance: float, hypotheses: bool = True) -> BoundVerdict:
    """
    Verdict for ``values <= bounds * (1 + tolerance)`` pointwise. Infinite bounds are vacuous.
    """
    values = np.asarray(values, dtype=float)
    bounds = np.asarray(bounds, dtype=float)
    finite = np.isfinite(bounds)
    if not np.any(finite):
        return BoundVerdict(name, True, 0.0, 0, hypotheses)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(bounds[finite] > 0, values[finite] / bounds[finite], np.inf)
    ratios = np.where(values[finite] <= 0, 0.0, ratios)
    max_ratio = float(np.max(ratios))
    return BoundVerdict(name, bool(max_ratio <= 1.0 + tolerance), max_ratio, int(np.count_nonzero(finite)), hypotheses)
