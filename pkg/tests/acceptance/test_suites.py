import pytest

from cmfe_gelation.analysis import BoundVerdict
from cmfe_gelation.exceptions import CMFEValidationError
from cmfe_gelation.grid import CMFEGridError
from cmfe_gelation.verification import (
    SUITE_NAMES,
    SUITES,
    run_suite,
    run_suites,
    suite_analytic_values,
    suite_breakage_closed_forms,
    suite_small_system_oracle,
)

SLOW_SUITES = [entry for entry in SUITES if entry[1] > 10]


def _failed(verdicts):
    return [verdict for verdict in verdicts if not verdict.holds]


def test_analytic_values():
    """Bound formulas match the hand-computed constants."""
    assert not _failed(suite_analytic_values())


def test_breakage_closed_forms():
    """Closed-form breakup integrals match Gauss-Legendre quadrature."""
    verdicts = suite_breakage_closed_forms(samples=100)
    assert verdicts
    assert not _failed(verdicts)


def test_small_system_oracle():
    """K = 1 and K = m m* on three pivots follow the discrete equation."""
    assert not _failed(suite_small_system_oracle())


@pytest.mark.slow
@pytest.mark.parametrize("name, budget, function", SLOW_SUITES, ids=[entry[0] for entry in SLOW_SUITES])
def test_slow_suite(name, budget, function):
    """Each long suite passes within its wall-clock budget."""
    verdict = run_suite(name, budget, function)
    assert verdict.error is None
    assert verdict.passed, [check.to_dict() for check in verdict.checks if not check.holds]


def test_run_suite_failure():
    """A failing check fails the suite."""

    def suite():
        return [BoundVerdict("ok", True, 0.5, 3), BoundVerdict("broken", False, 1.5, 3)]

    verdict = run_suite("mixed", 5, suite)
    assert not verdict.passed
    assert verdict.budget == 5
    assert [check.name for check in verdict.checks] == ["ok", "broken"]
    assert verdict.to_dict()["checks"][1]["holds"] is False


def test_run_suite_error():
    """An exception fails the suite and records the message."""

    def suite():
        raise CMFEGridError("Mass 5 is outside the grid")

    verdict = run_suite("raising", 5, suite)
    assert not verdict.passed
    assert verdict.checks == ()
    assert verdict.error == "Mass 5 is outside the grid"


def test_run_suites_selection():
    """Suites run in registry order, restricted to the names given."""
    verdicts = run_suites(["analytic_values", "breakage_closed_forms"])
    assert [verdict.name for verdict in verdicts] == ["breakage_closed_forms", "analytic_values"]
    assert all(verdict.passed for verdict in verdicts)


def test_run_suites_unknown():
    """Unknown names are rejected before anything runs."""
    with pytest.raises(CMFEValidationError, match="Unknown suites: nope"):
        run_suites(["analytic_values", "nope"])
    assert "determinism" in SUITE_NAMES
