"""Integrator exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFEIntegratorException(CMFEException):
    """Time stepping related CMFE exception"""


class CMFEControlsError(CMFEIntegratorException, ValueError):
    """Step controls are inconsistent"""


class CMFEInadmissibleModelError(CMFEIntegratorException):
    """A run was requested for a model that fails admissibility without force"""


class CMFENumericalError(CMFEIntegratorException):
    """A step produced NaN or Inf"""

    def __init__(self, message, dump_path=None):
        super().__init__(message if dump_path is None else f"{message} (state dumped to {dump_path})")
        self.dump_path = dump_path
