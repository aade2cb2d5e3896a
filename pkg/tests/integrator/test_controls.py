import math

import pytest

from cmfe_gelation.integrator import CMFEControlsError, StepControls


def test_defaults():
    """Record cadence defaults to a hundredth of the horizon."""
    controls = StepControls(t_end=5.0)
    assert controls.record_every == pytest.approx(0.05)
    assert controls.theta == 0.1
    assert controls.snapshot_times == ()


def test_zero_horizon_record_every():
    """A zero horizon still gets a positive cadence."""
    assert StepControls(t_end=0.0).record_every == 1.0


def test_snapshot_times_sorted():
    """Snapshot times are kept in order."""
    controls = StepControls(snapshot_times=(0.5, 0.1))
    assert controls.snapshot_times == (0.1, 0.5)
    assert controls.to_dict()["snapshot_times"] == [0.1, 0.5]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"t_end": -1.0},
        {"theta": 1.0},
        {"theta": 0.0},
        {"dt_min": 1.0, "dt_max": 0.1},
        {"dt_max": math.inf},
        {"record_every": 0.0},
        {"max_steps": 0},
        {"stop_gel_fraction": -0.1},
        {"snapshot_times": (-1.0,)},
        {"stability": 0.0},
    ],
)
def test_invalid_controls(kwargs):
    """Inconsistent controls are rejected."""
    with pytest.raises(CMFEControlsError):
        StepControls(**kwargs)
