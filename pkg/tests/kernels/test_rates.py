import numpy as np
import pytest

from cmfe_gelation.kernels import (
    CMFEDomainError,
    KernelForm,
    KernelModel,
    PhiKind,
    PhiSpec,
    SelectionForm,
    coag_rate,
    selection_rate,
)


@pytest.mark.parametrize(
    "m, m_star, expected",
    [
        (0.25, 0.25, 2.0),
        (0.25, 4.0, 4.0 * 0.25**-0.25),
        (4.0, 0.25, 4.0 * 0.25**-0.25),
        (4.0, 9.0, 36.0),
    ],
)
def test_coag_rate_piecewise(m, m_star, expected):
    """Piecewise form with k1 = 1, sigma = 0.25, G(m) = m."""
    model = KernelModel(sigma=0.25, gamma=0.0, gamma_poly=(0.0, 1.0))
    assert coag_rate(m, m_star, model) == pytest.approx(expected, rel=1e-14)


def test_coag_rate_piecewise_example_value():
    """(0.25, 4) gives about 5.65685."""
    model = KernelModel(sigma=0.25, gamma=0.0, gamma_poly=(0.0, 1.0))
    assert coag_rate(0.25, 4.0, model) == pytest.approx(5.65685, abs=1e-5)


def test_coag_rate_product_singular():
    """Product-singular form keeps the singular factor above one."""
    model = KernelModel(sigma=0.25, gamma=0.0, k1=2.0, gamma_poly=(1.0, 1.0), kernel_form=KernelForm.PRODUCT_SINGULAR)
    assert coag_rate(4.0, 9.0, model) == pytest.approx(2.0 * 5.0 * 10.0 * 36.0**-0.25)


def test_coag_rate_symmetric():
    """Random pairs give the same rate in both orders."""
    rng = np.random.default_rng(7)
    m = 10.0 ** rng.uniform(-4, 4, 500)
    m_star = 10.0 ** rng.uniform(-4, 4, 500)
    for form in KernelForm:
        model = KernelModel(sigma=0.2, gamma=0.0, gamma_poly=(0.5, 1.0, 0.25), kernel_form=form)
        np.testing.assert_array_equal(coag_rate(m, m_star, model), coag_rate(m_star, m, model))
        assert np.all(coag_rate(m, m_star, model) >= 0)


def test_coag_rate_array_shapes():
    """Broadcasting a column against a row gives a matrix."""
    model = KernelModel(sigma=0.0, gamma=0.0)
    masses = np.array([0.5, 1.0, 2.0])
    assert coag_rate(masses[:, None], masses[None, :], model).shape == (3, 3)


@pytest.mark.parametrize("m, m_star", [(0.0, 1.0), (1.0, -2.0), (np.nan, 1.0)])
def test_coag_rate_domain(m, m_star):
    """Nonpositive masses are rejected."""
    with pytest.raises(CMFEDomainError, match="must be positive"):
        coag_rate(m, m_star, KernelModel(sigma=0.0, gamma=0.0))


def test_selection_rate_zero_form():
    """The zero form never breaks anything."""
    model = KernelModel(sigma=0.0, gamma=0.0, k3=5.0, phi=PhiSpec(PhiKind.POWER, 1.0, 1.0))
    assert selection_rate(3.0, model) == 0.0


def test_selection_rate_linear_bound():
    """k3 = 0.1, phi(m) = 1 / (1 + m), m = 1 gives 0.05."""
    model = KernelModel(
        sigma=0.0,
        gamma=0.0,
        k3=0.1,
        phi=PhiSpec(PhiKind.POWER, 1.0, 1.0),
        selection_form=SelectionForm.LINEAR_BOUND,
    )
    assert selection_rate(1.0, model) == pytest.approx(0.05, rel=1e-15)


def test_selection_rate_power_bound():
    """Constant phi = 1, k3 = 1, gamma = 0, m = 2 gives 2."""
    model = KernelModel(
        sigma=0.0,
        gamma=0.0,
        k3=1.0,
        phi=PhiSpec(PhiKind.POWER, 1.0, 0.0),
        selection_form=SelectionForm.POWER_BOUND,
    )
    assert selection_rate(2.0, model) == pytest.approx(2.0)


def test_selection_rate_exponential_phi():
    """Exponential decay family."""
    model = KernelModel(
        sigma=0.0,
        gamma=-0.5,
        k3=2.0,
        phi=PhiSpec(PhiKind.EXPONENTIAL, 1.0, 0.5),
        selection_form=SelectionForm.POWER_BOUND,
    )
    assert selection_rate(4.0, model) == pytest.approx(2.0 * np.exp(-2.0) * 2.0)


def test_selection_rate_domain():
    """Nonpositive mass is rejected."""
    with pytest.raises(CMFEDomainError):
        selection_rate(0.0, KernelModel(sigma=0.0, gamma=0.0))
