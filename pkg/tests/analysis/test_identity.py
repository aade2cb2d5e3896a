import numpy as np
import pytest

from cmfe_gelation.analysis import CMFEResidualError, ThetaForm, moment_balance_residual
from cmfe_gelation.grid import build_grid
from cmfe_gelation.integrator import StepControls, run
from cmfe_gelation.kernels import KernelModel


def test_static_system_has_zero_residual(make_result):
    """No coagulation and no breakup: nothing to balance."""
    model = KernelModel(sigma=0.0, gamma=0.0, k1=0.0)
    result = make_result(model, np.full(20, 0.1), [0.0, 0.5, 1.0])
    np.testing.assert_array_equal(moment_balance_residual(result, ThetaForm.CONSTANT_ONE), 0.0)
    np.testing.assert_array_equal(moment_balance_residual(result, "mass-capped", lambda_star=1.0), 0.0)


def test_coagulation_mass_identity(product_model, exponential_data):
    """With the cap above the grid and a record at every step the identity is the mass ledger."""
    grid = build_grid(1e-1, 1e1, 10)
    controls = StepControls(t_end=0.05, record_every=5e-5, dt_max=1e-4)
    result = run(grid, product_model, exponential_data, controls, force=True)
    assert result.steps <= result.times.size - 1
    residual = moment_balance_residual(result, ThetaForm.MASS_CAPPED, lambda_star=1e3)
    assert residual[0] == 0.0
    assert np.max(residual) < 1e-8


def test_fragmentation_number_identity(mixed_model, exponential_data):
    """Pure breakup: N0(t) - N0(0) plus dust matches the time integral of (eta - 1) S N."""
    grid = build_grid(1e-4, 1e1, 20)
    model = mixed_model.replace(k1=0.0)
    result = run(grid, model, exponential_data, StepControls(t_end=0.1, record_every=0.005), force=True)
    residual = moment_balance_residual(result, ThetaForm.CONSTANT_ONE)
    assert result.moments["N0"][-1] > result.moments["N0"][0]
    assert np.max(residual) <= 1e-3


def test_number_identity_with_breakup(mixed_model, exponential_data):
    """Number identity with coagulation and breakup stays close."""
    grid = build_grid(1e-3, 1e2, 10)
    result = run(grid, mixed_model, exponential_data, StepControls(t_end=0.2, record_every=0.005), force=True)
    assert np.max(moment_balance_residual(result)) < 1e-2


def test_too_few_records(make_result, mixed_model):
    """Two records cannot be integrated."""
    result = make_result(mixed_model, np.full(20, 0.1), [0.0, 1.0])
    with pytest.raises(CMFEResidualError, match="at least 3"):
        moment_balance_residual(result)


@pytest.mark.parametrize("lambda_star", [None, 1e-3])
def test_cap_required(make_result, mixed_model, lambda_star):
    """The capped form needs a cap at or above the bottom edge."""
    result = make_result(mixed_model, np.full(20, 0.1), [0.0, 0.5, 1.0])
    with pytest.raises(CMFEResidualError):
        moment_balance_residual(result, ThetaForm.MASS_CAPPED, lambda_star=lambda_star)
