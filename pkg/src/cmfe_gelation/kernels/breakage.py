"""
Closed-form integrals of the power-law breakage function

    b(m | m*) = (gamma + 2) m^gamma / m*^(1 + gamma),  0 < m < m*.

The underscore helpers skip argument checks and are used by the scheme
when it assembles whole redistribution matrices at once.
"""

import numpy as np

from cmfe_gelation.kernels.exceptions import CMFEDomainError
from cmfe_gelation.kernels.model import KernelModel

# relative slack when comparing an interval end with the parent mass
_EDGE_SLACK = 1e-12


def _number_in(a, b, m_star, gamma):
    return (gamma + 2.0) / (gamma + 1.0) * (b ** (gamma + 1.0) - a ** (gamma + 1.0)) / m_star ** (gamma + 1.0)


def _mass_in(a, b, m_star, gamma):
    return (b ** (gamma + 2.0) - a ** (gamma + 2.0)) / m_star ** (gamma + 1.0)


def _check_interval(a, b, m_star):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m_star = np.asarray(m_star, dtype=float)
    if np.any(~(m_star > 0)):
        raise CMFEDomainError(f"parent mass must be positive, got {m_star}")
    if np.any(a < 0) or np.any(a > b) or np.any(b > m_star * (1.0 + _EDGE_SLACK)):
        raise CMFEDomainError(f"interval [{a}, {b}] is not inside [0, {m_star}]")
    return a, np.asarray(np.minimum(b, m_star), dtype=float), m_star


def fragment_number_in(a, b, m_star, model: KernelModel):
    """
    Expected number of fragments with mass in ``[a, b]`` from one breakup of ``m_star``.

    :raises CMFEDomainError: If ``[a, b]`` is not inside ``[0, m_star]``.
    """
    a, b, m_star = _check_interval(a, b, m_star)
    value = np.where(a < b, _number_in(a, b, m_star, model.gamma), 0.0)
    return value if value.ndim else float(value)


def fragment_mass_in(a, b, m_star, model: KernelModel):
    """
    Fragment mass in ``[a, b]`` from one breakup of ``m_star``.

    Over the full interval ``[0, m_star]`` this is ``m_star``.

    :raises CMFEDomainError: If ``[a, b]`` is not inside ``[0, m_star]``.
    """
    a, b, m_star = _check_interval(a, b, m_star)
    value = np.where(a < b, _mass_in(a, b, m_star, model.gamma), 0.0)
    return value if value.ndim else float(value)


def singular_fragment_moment(m_star, model: KernelModel):
    """
    Integral of ``m^(-2 sigma) b(m | m_star)`` over ``(0, m_star)``, equal to ``k2 m_star^(-2 sigma)``.

    :raises CMFEDomainError: If ``1 + gamma - 2 sigma <= 0`` (the integral diverges)
        or ``m_star`` is not positive.
    """
    if 1.0 + model.gamma - 2.0 * model.sigma <= 0:
        raise CMFEDomainError(
            f"singular fragment moment diverges for gamma={model.gamma}, sigma={model.sigma}: "
            "1 + gamma - 2 sigma must be positive"
        )
    m_star = np.asarray(m_star, dtype=float)
    if np.any(~(m_star > 0)):
        raise CMFEDomainError(f"parent mass must be positive, got {m_star}")
    value = model.k2 * m_star ** (-2.0 * model.sigma)
    return value if np.ndim(value) else float(value)
