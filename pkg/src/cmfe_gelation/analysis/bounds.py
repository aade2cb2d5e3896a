"""
Closed-form gelation bounds on the total mass ``N1(t)`` and their comparison
with simulated trajectories.
"""

import math
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from cmfe_gelation.analysis.estimates import InitialStats
from cmfe_gelation.analysis.exceptions import CMFEHypothesisError, CMFEWindowError
from cmfe_gelation.analysis.verdicts import BoundVerdict, compare
from cmfe_gelation.integrator import SimulationResult
from cmfe_gelation.kernels import KernelForm, KernelModel, validate_model

LOG = getLogger(__name__)

CURVES = ("coag_sqrt", "coag_ip", "coag_delta", "cmfe_t")
DEFAULT_TOLERANCE = 0.05


@dataclass(frozen=True)
class BoundsReport:  # pylint: disable=too-many-instance-attributes
    """
    Bound curves over ``times``.

    ``curves`` holds the branches that were requested and whose inputs were
    given. Curves are infinite where the bound is vacuous (``t = 0`` for the
    ``t^(-1/2)`` forms).
    """

    times: np.ndarray
    curves: Dict[str, np.ndarray]
    cmfe_limit: float
    t_dagger: Optional[float]
    inputs: dict
    p: Optional[float] = None
    delta: Optional[float] = None

    def __contains__(self, name: str) -> bool:
        return name in self.curves or (name == "cmfe_limit" and self.cmfe_limit is not None)

    def evaluate(self, name: str, t) -> np.ndarray:
        """
        Evaluate bound ``name`` at arbitrary times.

        :raises KeyError: If the branch was not computed.
        """
        if name == "cmfe_limit":
            return np.full(np.shape(t), self.cmfe_limit, dtype=float)
        if name not in self.curves:
            raise KeyError(name)
        return _CURVE_FUNCTIONS[name](self, np.asarray(t, dtype=float))

    def to_dict(self) -> dict:
        """Constants and inputs for manifests."""
        return {
            "cmfe_limit": self.cmfe_limit,
            "t_dagger": self.t_dagger,
            "p": self.p,
            "delta": self.delta,
            "curves": sorted(self.curves),
            "inputs": self.inputs,
        }


def _positive_time(t: np.ndarray) -> np.ndarray:
    return np.where(t > 0, t, np.nan)


def _coag_sqrt(report: BoundsReport, t):
    inputs = report.inputs
    value = math.sqrt(2.0 * inputs["n0_in"]) / (inputs["lambda"] * math.sqrt(inputs["k1"])) / np.sqrt(_positive_time(t))
    return np.where(t > 0, value, np.inf)


def _coag_ip(report: BoundsReport, t):
    p = report.p
    return report.inputs["n1_in"] * (1.0 + t * report.t_dagger) ** (-(p + 1.0) / (p + 2.0))


def _coag_delta(report: BoundsReport, t):
    inputs = report.inputs
    n1 = inputs["n1_in"]
    return n1 * math.sqrt(2.0) * (2.0 + inputs["k1"] * report.delta * inputs["lambda"] ** 2 * t * n1**2) ** -0.5


def _cmfe_t(report: BoundsReport, t):
    inputs = report.inputs
    lam2 = inputs["lambda"] ** 2
    drift = inputs["k3"] / lam2 * (inputs["eta"] - 1.0) * inputs["phi0"]
    value = drift + np.sqrt(drift**2 + 2.0 * inputs["q"] / (_positive_time(t) * lam2))
    return np.where(t > 0, value, np.inf)


_CURVE_FUNCTIONS = {
    "coag_sqrt": _coag_sqrt,
    "coag_ip": _coag_ip,
    "coag_delta": _coag_delta,
    "cmfe_t": _cmfe_t,
}


def t_dagger(p: float, n1_in: float, i_p: float, k1: float, lam: float) -> float:
    """
    Decay-rate constant of the singular-moment bound,
    ``(p + 2) / (2 p) * N1^((p + 2) / (p + 1)) * k1 lambda^2 * I_p^(-1 / (p + 1))``.
    """
    return (p + 2.0) / (2.0 * p) * n1_in ** ((p + 2.0) / (p + 1.0)) * k1 * lam**2 * i_p ** (-1.0 / (p + 1.0))


def _check_hypotheses(model: KernelModel) -> float:
    if model.kernel_form is not KernelForm.PRODUCT_SINGULAR:
        raise CMFEHypothesisError(f"Gelation bounds need the product-singular kernel, got {model.kernel_form.value}")
    lam = model.lambda_growth
    if lam is None or not lam > 1:
        raise CMFEHypothesisError(f"Gelation bounds need lambda_growth > 1, got {lam}")
    report = validate_model(model)
    if "growth-bound" in report and not report["growth-bound"].holds:
        raise CMFEHypothesisError(
            f"Growth polynomial {model.gamma_poly} is not bounded below by {lam} m^(1 + {model.sigma})"
        )
    return float(lam)


def theoretical_bounds(  # pylint: disable=too-many-arguments,too-many-positional-arguments
    model: KernelModel,
    stats: InitialStats,
    p: Optional[float] = None,
    delta: Optional[float] = None,
    times: Sequence[float] = (),
    branches: Optional[Sequence[str]] = None,
) -> BoundsReport:
    """
    Evaluate the gelation bounds.

    * ``coag_sqrt``: ``sqrt(2 N0) / (lambda sqrt(k1)) t^(-1/2)``
    * ``coag_ip``: ``N1 (1 + t T_dagger)^(-(p + 1) / (p + 2))``, needs ``p`` and ``stats.i_p``
    * ``coag_delta``: ``N1 sqrt(2) (2 + k1 delta lambda^2 t N1^2)^(-1/2)``, needs ``delta``
    * ``cmfe_t``: ``a + sqrt(a^2 + 2 Q / (t lambda^2))`` with ``a = k3 (eta - 1) phi(0) / lambda^2``
    * ``cmfe_limit``: ``2 a``

    :param model: Product-singular model with ``lambda_growth > 1``.
    :param stats: Initial data statistics.
    :param p: Exponent of the singular initial moment. Defaults to ``stats.p``.
    :param delta: Width of the empty initial band ``(0, delta)``.
    :param times: Evaluation times.
    :param branches: Curves to compute, all available ones by default.
    :rtype: BoundsReport
    :raises CMFEHypothesisError: If the kernel is not product-singular or ``lambda <= 1``,
        or a requested branch lacks its input.
    """
    lam = _check_hypotheses(model)
    p = stats.p if p is None else float(p)
    requested = set(CURVES) if branches is None else set(branches) - {"cmfe_limit"}
    unknown = requested - set(CURVES)
    if unknown:
        raise CMFEHypothesisError(f"Unknown bound branches: {', '.join(sorted(unknown))}")

    inputs = {
        "n0_in": stats.n0_in,
        "n1_in": stats.n1_in,
        "q": stats.q,
        "i_p": stats.i_p,
        "p": p,
        "delta": delta,
        "eta": model.eta,
        "phi0": model.phi.at_zero,
        "lambda": lam,
        "k1": model.k1,
        "k3": model.effective_k3,
    }

    dagger = None
    if "coag_ip" in requested:
        if p is None or stats.i_p is None or not p > 0:
            if branches is not None:
                raise CMFEHypothesisError("coag_ip needs p > 0 and the singular initial moment I_p")
            requested.discard("coag_ip")
        else:
            dagger = t_dagger(p, stats.n1_in, stats.i_p, model.k1, lam)
    if "coag_delta" in requested and (delta is None or not delta > 0):
        if branches is not None:
            raise CMFEHypothesisError("coag_delta needs delta > 0")
        requested.discard("coag_delta")

    cmfe_limit = 2.0 * inputs["k3"] / lam**2 * (inputs["eta"] - 1.0) * inputs["phi0"]
    report = BoundsReport(
        times=np.asarray(times, dtype=float),
        curves={},
        cmfe_limit=cmfe_limit,
        t_dagger=dagger,
        inputs=inputs,
        p=p,
        delta=delta,
    )
    for name in CURVES:
        if name in requested:
            report.curves[name] = _CURVE_FUNCTIONS[name](report, report.times)
    LOG.debug("Bounds %s, cmfe_limit=%.6g, t_dagger=%s", sorted(report.curves), cmfe_limit, dagger)
    return report


def _window_mask(result: SimulationResult, window: Optional[Tuple[float, float]]) -> np.ndarray:
    if window is None:
        window = (0.0, result.final_time)
    start, end = window
    if start > end:
        raise CMFEWindowError(f"Window [{start}, {end}] is inverted")
    mask = (result.times >= start) & (result.times <= end)
    if not np.any(mask):
        raise CMFEWindowError(f"No recorded time in [{start}, {end}]")
    return mask


def _meets_hypotheses(model: KernelModel) -> bool:
    try:
        _check_hypotheses(model)
    except CMFEHypothesisError:
        return False
    return True


def check_simulation_against_bounds(
    result: SimulationResult,
    report: BoundsReport,
    window: Optional[Tuple[float, float]] = None,
    tolerance: float = DEFAULT_TOLERANCE,
    names: Optional[Sequence[str]] = None,
) -> List[BoundVerdict]:
    """
    Compare the simulated ``N1(t)`` with every bound of ``report``.

    A curve holds iff ``N1(t) <= bound(t) * (1 + tolerance)`` at every recorded
    time in ``window``. ``cmfe_limit`` is compared at the last recorded time of
    the window. Whether the model of ``result`` meets the hypotheses of the
    bounds is recorded in every verdict.

    :param result: Simulated trajectory.
    :param report: Bounds to compare with.
    :param window: Closed time interval, the whole run by default.
    :param tolerance: Relative slack for discretization error.
    :param names: Bounds to check, every curve plus a positive ``cmfe_limit`` by default.
    :raises CMFEWindowError: If no recorded time falls in the window.
    """
    mask = _window_mask(result, window)
    times = result.times[mask]
    n1 = result.moments["N1"][mask]
    hypotheses = _meets_hypotheses(result.model)
    if not hypotheses:
        LOG.warning("Model of the run does not meet the gelation bound hypotheses")

    if names is None:
        names = [name for name in CURVES if name in report.curves]
        if report.cmfe_limit > 0:
            names.append("cmfe_limit")

    verdicts = []
    for name in names:
        if name == "cmfe_limit":
            verdict = compare(name, n1[-1:], [report.cmfe_limit], tolerance, hypotheses)
        else:
            verdict = compare(name, n1, report.evaluate(name, times), tolerance, hypotheses)
        LOG.info(
            "%s %s: max ratio %.4g over %d points",
            "PASS" if verdict.holds else "FAIL",
            name,
            verdict.max_ratio,
            verdict.points,
        )
        verdicts.append(verdict)
    return verdicts


def integrated_mass_check(
    result: SimulationResult, stats: InitialStats, tolerance: float = DEFAULT_TOLERANCE
) -> BoundVerdict:
    """
    Check the time-integrated mass estimate behind the bounds.

    Without fragmentation ``int_0^t N1^2 <= 2 N0 / (k1 lambda^2)``; with it
    ``int_0^t N1^2 <= 2 Q / lambda^2 + 2 k3 (eta - 1) phi(0) / lambda^2 * int_0^t N1``.
    Integrals are trapezoidal over the records.

    :raises CMFEHypothesisError: If the model is not product-singular with ``lambda > 1``.
    """
    model = result.model
    lam = _check_hypotheses(model)
    n1 = result.moments["N1"]
    squared = cumulative_trapezoid(n1**2, result.times, initial=0.0)
    if model.fragments:
        drift = 2.0 / lam**2 * model.effective_k3 * (model.eta - 1.0) * model.phi.at_zero
        bound = 2.0 / lam**2 * stats.q + drift * cumulative_trapezoid(n1, result.times, initial=0.0)
    else:
        bound = np.full_like(squared, 2.0 * stats.n0_in / (model.k1 * lam**2))
    return compare("integrated_mass", squared, bound, tolerance)
