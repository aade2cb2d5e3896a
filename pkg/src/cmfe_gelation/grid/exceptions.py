"""Grid and initial data exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFEGridException(CMFEException):
    """Grid related CMFE exception"""


class CMFEGridError(CMFEGridException, ValueError):
    """Grid parameters are inconsistent"""


class CMFEInitialDataError(CMFEGridException, ValueError):
    """Initial data cannot be placed on the grid"""
