"""
Rate-law parameters of the coagulation and multiple fragmentation model.

:class:`KernelModel` is an immutable value. Everything derived from it
(fragment count per breakup, singular-moment constant, the growth polynomial)
is computed lazily and cached on the instance.
"""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from cached_property import cached_property
from numpy.polynomial import polynomial as P

from cmfe_gelation.kernels.exceptions import CMFEModelError


class KernelForm(Enum):
    """Functional form of the coagulation rate."""

    PIECEWISE = "piecewise"
    PRODUCT_SINGULAR = "product-singular"


class SelectionForm(Enum):
    """Functional form of the selection (breakup) rate."""

    POWER_BOUND = "power-bound"
    LINEAR_BOUND = "linear-bound"
    ZERO = "zero"


class PhiKind(Enum):
    """Decay family of the weak-fragmentation function."""

    POWER = "power"
    EXPONENTIAL = "exponential"
    ZERO = "zero"


@dataclass(frozen=True)
class PhiSpec:
    """
    Weak-fragmentation decay function.

    * power: ``phi0 * (1 + m) ** -decay``
    * exponential: ``phi0 * exp(-decay * m)``
    * zero: identically zero

    A power family with ``decay == 0`` is the constant ``phi0``; it is a valid
    rate law but does not vanish at infinity.
    """

    kind: PhiKind = PhiKind.ZERO
    phi0: float = 0.0
    decay: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, PhiKind):
            try:
                object.__setattr__(self, "kind", PhiKind(self.kind))
            except ValueError as err:
                raise CMFEModelError(f"phi.kind: unknown decay family {self.kind!r}") from err

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        if self.kind is PhiKind.POWER:
            value = self.phi0 * (1.0 + m) ** (-self.decay)
        elif self.kind is PhiKind.EXPONENTIAL:
            value = self.phi0 * np.exp(-self.decay * m)
        else:
            value = np.zeros_like(m)
        return value if value.ndim else float(value)

    @property
    def at_zero(self) -> float:
        """phi(0)."""
        return 0.0 if self.kind is PhiKind.ZERO else float(self.phi0)

    @property
    def vanishes_at_infinity(self) -> bool:
        """True for the families whose limit at infinity is zero."""
        if self.kind is PhiKind.ZERO or self.phi0 == 0:
            return True
        return self.decay > 0

    def to_dict(self) -> dict:
        """Plain representation for configs and manifests."""
        return {"kind": self.kind.value, "phi0": self.phi0, "decay": self.decay}


@dataclass(frozen=True)
class KernelModel:  # pylint: disable=too-many-instance-attributes
    """
    All rate-law parameters.

    :param sigma: Singularity exponent of the coagulation rate.
    :param gamma: Breakage exponent, the fragment density is ``(gamma + 2) m^gamma / m*^(1 + gamma)``.
    :param k1: Coagulation rate constant.
    :param k3: Selection rate constant.
    :param gamma_poly: Coefficients of the growth polynomial, lowest order first.
        ``(0, 1)`` is ``m``, ``(1,)`` is the constant one.
    :param lambda_growth: Growth constant of the product-singular form, ``None`` when
        the gelation bounds are not evaluated.
    :param phi: Weak-fragmentation decay function.
    :param kernel_form: Piecewise or product-singular coagulation rate.
    :param selection_form: Power-bound, linear-bound or zero selection rate.
    """

    sigma: float
    gamma: float
    k1: float = 1.0
    k3: float = 0.0
    gamma_poly: Tuple[float, ...] = (1.0,)
    lambda_growth: Optional[float] = None
    phi: PhiSpec = field(default_factory=PhiSpec)
    kernel_form: KernelForm = KernelForm.PIECEWISE
    selection_form: SelectionForm = SelectionForm.ZERO

    def __post_init__(self):
        try:
            object.__setattr__(self, "gamma_poly", tuple(float(c) for c in self.gamma_poly))
        except (TypeError, ValueError) as err:
            raise CMFEModelError(f"gamma_poly must be a sequence of numbers, got {self.gamma_poly!r}") from err
        if not isinstance(self.kernel_form, KernelForm):
            try:
                object.__setattr__(self, "kernel_form", KernelForm(self.kernel_form))
            except ValueError as err:
                raise CMFEModelError(f"kernel_form: unknown form {self.kernel_form!r}") from err
        if not isinstance(self.selection_form, SelectionForm):
            try:
                object.__setattr__(self, "selection_form", SelectionForm(self.selection_form))
            except ValueError as err:
                raise CMFEModelError(f"selection_form: unknown form {self.selection_form!r}") from err
        if isinstance(self.phi, dict):
            object.__setattr__(self, "phi", PhiSpec(**self.phi))

    @cached_property
    def eta(self) -> float:
        """Expected fragment count per breakup, ``(gamma + 2) / (gamma + 1)``."""
        return (self.gamma + 2.0) / (self.gamma + 1.0)

    @cached_property
    def k2(self) -> float:
        """Singular fragment moment constant. Infinite when the moment diverges."""
        denominator = 1.0 + self.gamma - 2.0 * self.sigma
        if denominator <= 0:
            return float("inf")
        return (self.gamma + 2.0) / denominator

    @cached_property
    def effective_k3(self) -> float:
        """Selection constant as seen by the bounds, zero when nothing breaks."""
        if self.selection_form is SelectionForm.ZERO or self.phi.kind is PhiKind.ZERO:
            return 0.0
        return float(self.k3)

    @property
    def fragments(self) -> bool:
        """True when the selection rate is not identically zero."""
        return self.effective_k3 > 0 and self.phi.at_zero > 0

    def growth(self, m):
        """Growth polynomial evaluated at ``m``."""
        value = P.polyval(np.asarray(m, dtype=float), self.gamma_poly)
        return value if np.ndim(value) else float(value)

    def replace(self, **changes) -> "KernelModel":
        """Copy of the model with some fields changed."""
        return replace(self, **changes)

    def to_dict(self) -> dict:
        """Plain representation for configs, manifests and cache keys."""
        result = asdict(self)
        result["gamma_poly"] = list(self.gamma_poly)
        result["phi"] = self.phi.to_dict()
        result["kernel_form"] = self.kernel_form.value
        result["selection_form"] = self.selection_form.value
        return result

    @classmethod
    def from_dict(cls, data: dict) -> "KernelModel":
        """Inverse of :meth:`to_dict`."""
        data = dict(data)
        if "phi" in data and isinstance(data["phi"], dict):
            data["phi"] = PhiSpec(**data["phi"])
        return cls(**data)
