"""Top level exceptions.

The exception hierarchy repeats the structure of the cmfe_gelation package.
Each subpackage has its own exceptions.py module and its exceptions
inherit from the exceptions defined here.

"""


class CMFEException(Exception):
    """Generic CMFE Gelation exception"""


class CMFEValidationError(CMFEException, ValueError):
    """An argument failed a validation helper"""


class CMFETimeoutError(CMFEException, TimeoutError):
    """A block of work ran past its wall-clock limit"""
