"""Rate laws: coagulation rate, selection rate, breakage integrals and admissibility checks."""

from cmfe_gelation.kernels.admissibility import (
    AdmissibilityReport,
    ConditionResult,
    validate_model,
)
from cmfe_gelation.kernels.breakage import (
    fragment_mass_in,
    fragment_number_in,
    singular_fragment_moment,
)
from cmfe_gelation.kernels.exceptions import (
    CMFEDomainError,
    CMFEKernelException,
    CMFEModelError,
)
from cmfe_gelation.kernels.model import (
    KernelForm,
    KernelModel,
    PhiKind,
    PhiSpec,
    SelectionForm,
)
from cmfe_gelation.kernels.rates import coag_rate, selection_rate

__all__ = [
    "AdmissibilityReport",
    "CMFEDomainError",
    "CMFEKernelException",
    "CMFEModelError",
    "ConditionResult",
    "KernelForm",
    "KernelModel",
    "PhiKind",
    "PhiSpec",
    "SelectionForm",
    "coag_rate",
    "fragment_mass_in",
    "fragment_number_in",
    "selection_rate",
    "singular_fragment_moment",
    "validate_model",
]
