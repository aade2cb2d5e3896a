"""Scheme exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFESchemeException(CMFEException):
    """Discretization related CMFE exception"""


class CMFETableMismatchError(CMFESchemeException, ValueError):
    """A state does not live on the grid a table was built for"""
