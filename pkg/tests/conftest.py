import logging

import pytest

from cmfe_gelation.grid import ExponentialData, build_grid
from cmfe_gelation.kernels import KernelForm, KernelModel, PhiKind, PhiSpec, SelectionForm
from cmfe_gelation.logging import setup_logging

LOG = logging.getLogger()

setup_logging(LOG)


@pytest.fixture
def small_grid():
    """Two decades at 10 cells per decade."""
    return build_grid(1e-1, 1e1, 10)


@pytest.fixture
def product_model():
    """K = m m*, no breakup."""
    return KernelModel(sigma=0.0, gamma=-0.5, gamma_poly=(0.0, 1.0), kernel_form=KernelForm.PRODUCT_SINGULAR)


@pytest.fixture
def mixed_model():
    """Singular piecewise coagulation with linear-bound breakup."""
    return KernelModel(
        sigma=0.1,
        gamma=0.0,
        k1=0.5,
        k3=0.1,
        gamma_poly=(1.0,),
        phi=PhiSpec(PhiKind.POWER, phi0=1.0, decay=1.0),
        selection_form=SelectionForm.LINEAR_BOUND,
    )


@pytest.fixture
def exponential_data():
    """g(m) = exp(-m)."""
    return ExponentialData(1.0, 1.0)
