"""
Coagulation and selection rates.

Both functions accept scalars or numpy arrays. Scalars in, float out.
"""

import numpy as np

from cmfe_gelation.kernels.exceptions import CMFEDomainError
from cmfe_gelation.kernels.model import KernelForm, KernelModel, SelectionForm


def _masses(name, value) -> np.ndarray:
    value = np.asarray(value, dtype=float)
    if np.any(~(value > 0)):
        raise CMFEDomainError(f"{name} must be positive, got {value if value.ndim == 0 else value[~(value > 0)]}")
    return value


def _scalar_or_array(value: np.ndarray):
    return value if value.ndim else float(value)


def coag_rate(m, m_star, model: KernelModel):
    """
    Coagulation rate of a pair of particles.

    Piecewise form::

        k1 (m m*)^-sigma      both masses below one
        k1 G(m*) m^-sigma     only m below one
        k1 G(m) G(m*)         both at or above one

    Product-singular form: ``k1 G(m) G(m*) (m m*)^-sigma`` everywhere.

    :param m: Mass of the first particle.
    :param m_star: Mass of the second particle.
    :param model: Rate-law parameters.
    :type model: KernelModel
    :return: The rate, symmetric in its arguments.
    :raises CMFEDomainError: If a mass is not positive.
    """
    m = _masses("m", m)
    m_star = _masses("m_star", m_star)
    m, m_star = np.broadcast_arrays(m, m_star)

    if model.kernel_form is KernelForm.PRODUCT_SINGULAR:
        rate = model.k1 * model.growth(m) * model.growth(m_star) * (m * m_star) ** (-model.sigma)
        return _scalar_or_array(np.asarray(rate, dtype=float))

    small = m < 1.0
    small_star = m_star < 1.0
    rate = np.where(
        small & small_star,
        (m * m_star) ** (-model.sigma),
        np.where(
            small,
            model.growth(m_star) * m ** (-model.sigma),
            np.where(
                small_star,
                model.growth(m) * m_star ** (-model.sigma),
                model.growth(m) * model.growth(m_star),
            ),
        ),
    )
    return _scalar_or_array(model.k1 * np.asarray(rate, dtype=float))


def selection_rate(m, model: KernelModel):
    """
    Rate at which a particle of mass ``m`` breaks up.

    ``k3 phi(m) m^(1 + gamma)`` for the power-bound form, ``k3 phi(m) m`` for the
    linear-bound form, zero otherwise.

    :raises CMFEDomainError: If a mass is not positive.
    """
    m = _masses("m", m)
    if model.selection_form is SelectionForm.POWER_BOUND:
        rate = model.k3 * np.asarray(model.phi(m)) * m ** (1.0 + model.gamma)
    elif model.selection_form is SelectionForm.LINEAR_BOUND:
        rate = model.k3 * np.asarray(model.phi(m)) * m
    else:
        rate = np.zeros_like(m)
    return _scalar_or_array(np.asarray(rate, dtype=float))
