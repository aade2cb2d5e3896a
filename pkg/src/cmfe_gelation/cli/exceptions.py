"""CLI exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFECliException(CMFEException):
    """Command line related CMFE exception"""


class CMFEConfigError(CMFECliException, ValueError):
    """Configuration file is malformed, has unknown keys or an inadmissible combination"""
