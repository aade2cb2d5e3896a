"""
Admissibility checks of a :class:`KernelModel` against the standing assumptions
of the well-posedness and gelation results.
"""

import math
from dataclasses import dataclass
from logging import getLogger
from typing import Iterator, Optional, Tuple

import numpy as np

from cmfe_gelation.kernels.exceptions import CMFEModelError
from cmfe_gelation.kernels.model import KernelForm, KernelModel
from cmfe_gelation.validation import validate_finite

LOG = getLogger(__name__)

GROWTH_SAMPLES = 256
# relative slack of the sampled growth comparison
_GROWTH_SLACK = 1e-12


@dataclass(frozen=True)
class ConditionResult:
    """One checked assumption."""

    condition: str
    holds: bool
    value: float
    interval: Optional[Tuple[float, float]] = None

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        result = {"condition": self.condition, "holds": self.holds, "value": self.value}
        if self.interval is not None:
            result["interval"] = list(self.interval)
        return result


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of :func:`validate_model`, one record per condition."""

    conditions: Tuple[ConditionResult, ...]

    def __iter__(self) -> Iterator[ConditionResult]:
        return iter(self.conditions)

    def __getitem__(self, condition: str) -> ConditionResult:
        for result in self.conditions:
            if result.condition == condition:
                return result
        raise KeyError(condition)

    def __contains__(self, condition: str) -> bool:
        return any(result.condition == condition for result in self.conditions)

    @property
    def passed(self) -> bool:
        """True iff every condition holds."""
        return all(result.holds for result in self.conditions)

    @property
    def failures(self) -> Tuple[ConditionResult, ...]:
        """Conditions that do not hold."""
        return tuple(result for result in self.conditions if not result.holds)

    @property
    def p_interval(self) -> Tuple[float, float]:
        """Feasible exponents ``p`` of the singular initial moment."""
        return self["p-interval"].interval

    def summary(self) -> str:
        """One line per condition, for logs and the CLI."""
        return "\n".join(
            f"{'PASS' if result.holds else 'FAIL'} {result.condition}: {result.value:.6g}" for result in self.conditions
        )

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return {"passed": self.passed, "conditions": [result.to_dict() for result in self.conditions]}


def _check_fields(model: KernelModel):
    for name in ("sigma", "gamma", "k1", "k3"):
        validate_finite(name, getattr(model, name), CMFEModelError)
    if not model.gamma_poly:
        raise CMFEModelError("gamma_poly must not be empty")
    for index, coefficient in enumerate(model.gamma_poly):
        validate_finite(f"gamma_poly[{index}]", coefficient, CMFEModelError)
    if model.lambda_growth is not None:
        validate_finite("lambda_growth", model.lambda_growth, CMFEModelError)
    validate_finite("phi.phi0", model.phi.phi0, CMFEModelError)
    validate_finite("phi.decay", model.phi.decay, CMFEModelError)


def _p_interval(model: KernelModel) -> Tuple[float, float]:
    gap = model.sigma - model.gamma
    upper = 2.0 if gap <= 0.5 else 1.0 / gap
    return 1.0, min(2.0, upper)


def _growth_condition(model: KernelModel, mass_range: Tuple[float, float]) -> ConditionResult:
    lam = model.lambda_growth
    masses = np.logspace(math.log10(mass_range[0]), math.log10(mass_range[1]), GROWTH_SAMPLES)
    ratio = np.asarray(model.growth(masses)) / (lam * masses ** (1.0 + model.sigma))
    worst = float(np.min(ratio))

    coefficients = np.trim_zeros(np.asarray(model.gamma_poly), "b")
    degree = len(coefficients) - 1
    if degree < 0:
        asymptotic = False
    elif degree > 1.0 + model.sigma:
        asymptotic = coefficients[-1] > 0
    elif degree == 1.0 + model.sigma:
        asymptotic = coefficients[-1] >= lam
    else:
        asymptotic = False

    holds = lam > 1.0 and worst >= 1.0 - _GROWTH_SLACK and asymptotic
    return ConditionResult("growth-bound", holds, worst)


def validate_model(model: KernelModel, mass_range: Tuple[float, float] = (1e-6, 1e6)) -> AdmissibilityReport:
    """
    Check every standing assumption on the rate laws.

    The growth condition ``G(m) >= lambda m^(1 + sigma)`` is only checked for the
    product-singular form with ``lambda_growth`` set. It samples
    :data:`GROWTH_SAMPLES` log-spaced masses over ``mass_range`` and compares the
    leading coefficient of the polynomial for large masses.

    :param model: Rate-law parameters.
    :type model: KernelModel
    :param mass_range: Sampling window of the growth condition.
    :return: Report with one record per condition.
    :rtype: AdmissibilityReport
    :raises CMFEModelError: If a field is not finite or ``gamma_poly`` is empty.
    """
    _check_fields(model)
    sigma, gamma = model.sigma, model.gamma

    conditions = [
        ConditionResult("gamma-range", -1.0 < gamma <= 0.0, gamma),
        ConditionResult("sigma-range", 0.0 <= sigma < (1.0 + gamma) / 2.0, sigma),
        ConditionResult("rate-constants", model.k1 > 0 and model.k3 >= 0, model.k1),
        ConditionResult("gamma-poly", min(model.gamma_poly) >= 0 and max(model.gamma_poly) > 0, min(model.gamma_poly)),
    ]

    k2 = model.k2
    conditions.append(ConditionResult("k2", k2 > 2.0, k2 if math.isfinite(k2) else 1.0 + gamma - 2.0 * sigma))

    low, high = _p_interval(model)
    conditions.append(ConditionResult("p-interval", high > low, high, (low, high)))

    eta = model.eta if gamma > -1.0 else 0.0
    conditions.append(ConditionResult("eta", eta >= 2.0, eta))

    phi_tail = float(model.phi(mass_range[1]))
    conditions.append(ConditionResult("phi-decay", model.phi.vanishes_at_infinity and model.phi.phi0 >= 0, phi_tail))

    if model.kernel_form is KernelForm.PRODUCT_SINGULAR and model.lambda_growth is not None:
        conditions.append(_growth_condition(model, mass_range))

    report = AdmissibilityReport(tuple(conditions))
    if not report.passed:
        LOG.debug("Model %s fails: %s", model, ", ".join(result.condition for result in report.failures))
    return report
