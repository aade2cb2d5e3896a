"""Argument validators shared by the model, grid and controls constructors."""

import math
from logging import getLogger
from numbers import Real
from typing import Type

from cmfe_gelation.exceptions import CMFEValidationError

LOG = getLogger(__name__)


def validate_finite(name: str, value, error: Type[Exception] = CMFEValidationError) -> float:
    """
    Make sure ``value`` is a finite real number.

    :param name: Field name used in the error message.
    :type name: str
    :param value: Value to check.
    :param error: Exception class to raise.
    :return: ``value`` converted to float.
    :rtype: float
    :raises CMFEValidationError: If the value is not a finite real.
    """
    if isinstance(value, bool) or not isinstance(value, Real):
        raise error(f"{name} must be a real number, got {type(value).__name__}")

    value = float(value)
    if not math.isfinite(value):
        raise error(f"{name} must be finite, got {value!r}")

    return value


def validate_positive(name: str, value, error: Type[Exception] = CMFEValidationError) -> float:
    """
    Make sure ``value`` is a finite, strictly positive real number.

    :param name: Field name used in the error message.
    :type name: str
    :param value: Value to check.
    :param error: Exception class to raise.
    :return: ``value`` converted to float.
    :rtype: float
    :raises CMFEValidationError: If the value is not positive.
    """
    value = validate_finite(name, value, error)
    if value <= 0:
        raise error(f"{name} must be positive, got {value!r}")

    return value


def validate_nonnegative(name: str, value, error: Type[Exception] = CMFEValidationError) -> float:
    """Same as :func:`validate_positive` but accepts zero."""
    value = validate_finite(name, value, error)
    if value < 0:
        raise error(f"{name} must be nonnegative, got {value!r}")

    return value
