"""Gelation bounds, a-priori estimates, identity residuals and gel-time extrapolation."""

from cmfe_gelation.analysis.bounds import (
    CURVES,
    DEFAULT_TOLERANCE,
    BoundsReport,
    check_simulation_against_bounds,
    integrated_mass_check,
    t_dagger,
    theoretical_bounds,
)
from cmfe_gelation.analysis.checks import (
    CollisionIntegrals,
    apriori_check,
    collision_integrals,
    mass_monotonicity,
    singular_moment_monotonicity,
    support_gap_preserved,
)
from cmfe_gelation.analysis.estimates import (
    AprioriReport,
    InitialStats,
    apriori_estimates,
    initial_stats,
)
from cmfe_gelation.analysis.exceptions import (
    CMFEAnalysisException,
    CMFEGelTimeError,
    CMFEHypothesisError,
    CMFEResidualError,
    CMFEWindowError,
)
from cmfe_gelation.analysis.geltime import (
    DEFAULT_GEL_TOLERANCE,
    GelTimeEstimate,
    crossing_time,
    estimate_gel_time,
)
from cmfe_gelation.analysis.identity import ThetaForm, moment_balance_residual
from cmfe_gelation.analysis.verdicts import BoundVerdict, compare

__all__ = [
    "AprioriReport",
    "BoundVerdict",
    "BoundsReport",
    "CMFEAnalysisException",
    "CMFEGelTimeError",
    "CMFEHypothesisError",
    "CMFEResidualError",
    "CMFEWindowError",
    "CURVES",
    "CollisionIntegrals",
    "DEFAULT_GEL_TOLERANCE",
    "DEFAULT_TOLERANCE",
    "GelTimeEstimate",
    "InitialStats",
    "ThetaForm",
    "apriori_check",
    "apriori_estimates",
    "check_simulation_against_bounds",
    "collision_integrals",
    "compare",
    "crossing_time",
    "estimate_gel_time",
    "initial_stats",
    "integrated_mass_check",
    "mass_monotonicity",
    "moment_balance_residual",
    "singular_moment_monotonicity",
    "support_gap_preserved",
    "t_dagger",
    "theoretical_bounds",
]
