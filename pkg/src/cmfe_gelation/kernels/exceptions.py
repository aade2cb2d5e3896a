"""Kernel exceptions."""

from cmfe_gelation.exceptions import CMFEException


class CMFEKernelException(CMFEException):
    """Rate-law related CMFE exception"""


class CMFEModelError(CMFEKernelException, ValueError):
    """A KernelModel field is malformed or not finite"""


class CMFEDomainError(CMFEKernelException, ValueError):
    """A rate law was evaluated outside of its domain"""
