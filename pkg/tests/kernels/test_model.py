import pytest

from cmfe_gelation.kernels import (
    CMFEModelError,
    KernelForm,
    KernelModel,
    PhiKind,
    PhiSpec,
    SelectionForm,
)


def test_derived_constants():
    """eta and k2 from gamma and sigma."""
    model = KernelModel(sigma=0.25, gamma=0.0)
    assert model.eta == 2.0
    assert model.k2 == 4.0


def test_k2_infinite_when_divergent():
    """k2 is infinite when 1 + gamma - 2 sigma <= 0."""
    assert KernelModel(sigma=0.5, gamma=0.0).k2 == float("inf")


def test_strings_coerced_to_enums():
    """Config strings become enum members."""
    model = KernelModel(
        sigma=0.0,
        gamma=0.0,
        kernel_form="product-singular",
        selection_form="linear-bound",
        phi={"kind": "exponential", "phi0": 1.0, "decay": 2.0},
    )
    assert model.kernel_form is KernelForm.PRODUCT_SINGULAR
    assert model.selection_form is SelectionForm.LINEAR_BOUND
    assert model.phi.kind is PhiKind.EXPONENTIAL


@pytest.mark.parametrize(
    "changes, match",
    [
        ({"kernel_form": "triangular"}, "kernel_form"),
        ({"selection_form": "always"}, "selection_form"),
        ({"gamma_poly": ("a",)}, "gamma_poly"),
    ],
)
def test_bad_fields(changes, match):
    """Unknown enum values and non-numeric coefficients are rejected."""
    with pytest.raises(CMFEModelError, match=match):
        KernelModel(sigma=0.0, gamma=0.0, **changes)


def test_effective_k3():
    """Selection constant only counts when something can break."""
    phi = PhiSpec(PhiKind.POWER, 1.0, 1.0)
    assert KernelModel(sigma=0.0, gamma=0.0, k3=0.3, phi=phi).effective_k3 == 0.0
    breaking = KernelModel(sigma=0.0, gamma=0.0, k3=0.3, phi=phi, selection_form=SelectionForm.LINEAR_BOUND)
    assert breaking.effective_k3 == 0.3
    assert breaking.fragments


def test_phi_families():
    """phi values and phi(0)."""
    assert PhiSpec(PhiKind.POWER, 2.0, 1.0)(1.0) == pytest.approx(1.0)
    assert PhiSpec(PhiKind.EXPONENTIAL, 1.0, 1.0).at_zero == 1.0
    assert PhiSpec()(5.0) == 0.0
    assert PhiSpec().at_zero == 0.0
    assert not PhiSpec(PhiKind.POWER, 1.0, 0.0).vanishes_at_infinity


def test_growth_polynomial():
    """Coefficients are lowest order first."""
    model = KernelModel(sigma=0.0, gamma=0.0, gamma_poly=(1.0, 0.0, 2.0))
    assert model.growth(3.0) == pytest.approx(19.0)


def test_dict_round_trip():
    """from_dict inverts to_dict."""
    model = KernelModel(
        sigma=0.1,
        gamma=-0.2,
        k3=0.4,
        gamma_poly=(1.0, 1.0),
        lambda_growth=1.5,
        phi=PhiSpec(PhiKind.POWER, 1.0, 1.0),
        kernel_form=KernelForm.PRODUCT_SINGULAR,
        selection_form=SelectionForm.POWER_BOUND,
    )
    assert KernelModel.from_dict(model.to_dict()) == model
