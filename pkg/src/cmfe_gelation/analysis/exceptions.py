"""Analysis exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFEAnalysisException(CMFEException):
    """Bounds, estimates and residuals related CMFE exception"""


class CMFEHypothesisError(CMFEAnalysisException, ValueError):
    """The model does not satisfy the hypotheses of a bound or estimate"""


class CMFEResidualError(CMFEAnalysisException, ValueError):
    """A residual cannot be computed from the recorded trajectory"""


class CMFEGelTimeError(CMFEAnalysisException, ValueError):
    """The results do not form a refinement sequence"""


class CMFEWindowError(CMFEAnalysisException, ValueError):
    """A time window holds no recorded time"""
