import numpy as np
import pytest

from cmfe_gelation.grid import DensityState, MonodisperseData, build_grid
from cmfe_gelation.integrator import (
    LEDGER_NAMES,
    MOMENT_NAMES,
    CMFEInadmissibleModelError,
    StepControls,
    run,
)
from cmfe_gelation.kernels import KernelModel


@pytest.fixture
def wide_grid():
    """[1e-3, 1e2] at 10 cells per decade."""
    return build_grid(1e-3, 1e2, 10)


def test_zero_horizon_single_record(small_grid, mixed_model, exponential_data):
    """t_end = 0 records the initial state only."""
    result = run(small_grid, mixed_model, exponential_data, StepControls(t_end=0.0), force=True)
    np.testing.assert_array_equal(result.times, [0.0])
    assert set(result.moments) == set(MOMENT_NAMES)
    assert set(result.ledger) == set(LEDGER_NAMES)
    assert result.steps == 0
    assert result.densities.shape == (1, small_grid.size)
    assert result.ledger_residual()[0] == 0.0


def test_record_times(small_grid, mixed_model, exponential_data):
    """Records land exactly on the cadence and the horizon."""
    controls = StepControls(t_end=0.25, record_every=0.1, snapshot_times=(0.0, 0.15))
    result = run(small_grid, mixed_model, exponential_data, controls, force=True)
    np.testing.assert_allclose(result.times, [0.0, 0.1, 0.15, 0.2, 0.25], rtol=1e-12)
    assert sorted(result.snapshots) == pytest.approx([0.0, 0.15, 0.25])
    assert result.final_time == pytest.approx(0.25)
    np.testing.assert_allclose(result.moment_series(1.0), result.moments["N1"], rtol=1e-14)


def test_pregel_number_decay(wide_grid, product_model, exponential_data):
    """K = m m*: N0 drops by t / 2 before gelation and the ledger closes."""
    result = run(wide_grid, product_model, exponential_data, StepControls(t_end=0.3, record_every=0.05), force=True)
    n0 = result.moments["N0"]
    assert np.all(np.diff(n0) < 0)
    assert n0[-1] == pytest.approx(n0[0] - 0.15, abs=5e-3)
    assert np.max(result.ledger_residual()) < 1e-8
    assert result.state_at(-1).t == pytest.approx(0.3)


def test_postgel_mass_loss(product_model, exponential_data):
    """K = m m*: the grid loses mass to gel after t = 1/2."""
    grid = build_grid(1e-2, 1e2, 5)
    result = run(grid, product_model, exponential_data, StepControls(t_end=3.0, record_every=0.5), force=True)
    n1 = result.moments["N1"]
    assert n1[-1] < 0.5 * n1[0]
    assert result.ledger["gel_mass"][-1] > 0.5 * n1[0]
    assert np.max(result.ledger_residual()) < 1e-8


def test_stop_gel_fraction(product_model, exponential_data):
    """The run stops once the gel holds the requested share."""
    grid = build_grid(1e-2, 1e2, 5)
    controls = StepControls(t_end=3.0, record_every=0.5, stop_gel_fraction=0.1)
    result = run(grid, product_model, exponential_data, controls, force=True)
    assert result.stopped_early
    assert result.final_time < 3.0
    assert result.ledger["gel_mass"][-1] >= 0.1 * result.n1_initial


def test_max_steps_truncates(small_grid, product_model, exponential_data):
    """Running out of steps flags the result instead of raising."""
    result = run(small_grid, product_model, exponential_data, StepControls(t_end=1.0, max_steps=3), force=True)
    assert result.truncated
    assert result.steps == 3
    assert result.metadata["truncated"] is True


def test_inadmissible_model_needs_force(small_grid, exponential_data):
    """sigma outside its range stops the run unless forced."""
    model = KernelModel(sigma=0.6, gamma=0.0)
    with pytest.raises(CMFEInadmissibleModelError, match="sigma-range"):
        run(small_grid, model, exponential_data, StepControls(t_end=0.0))
    result = run(small_grid, model, exponential_data, StepControls(t_end=0.0), force=True)
    assert result.forced
    assert result.metadata["forced"] is True


def test_explicit_initial_state(small_grid, mixed_model):
    """A state can replace an initial data family."""
    state = DensityState(np.ones(small_grid.size), t=5.0)
    result = run(small_grid, mixed_model, state, StepControls(t_end=0.0), force=True)
    assert result.initial == {"kind": "state"}
    assert result.times[0] == 0.0


def test_monodisperse_metadata(small_grid, mixed_model):
    """Metadata carries the grid, model and initial data."""
    result = run(small_grid, mixed_model, MonodisperseData(mass=1.0), StepControls(t_end=0.0), force=True)
    metadata = result.metadata
    assert metadata["grid"]["cells"] == small_grid.size
    assert metadata["initial"] == {"kind": "monodisperse", "mass": 1.0, "number": 1.0}
    assert metadata["model"] == mixed_model.to_dict()


def test_workers_do_not_change_results(wide_grid, mixed_model, exponential_data):
    """Serial and threaded runs agree bit for bit."""
    controls = StepControls(t_end=0.05, record_every=0.01)
    serial = run(wide_grid, mixed_model, exponential_data, controls, force=True)
    threaded = run(wide_grid, mixed_model, exponential_data, controls, force=True, workers=4)
    np.testing.assert_array_equal(serial.densities, threaded.densities)
    np.testing.assert_array_equal(serial.times, threaded.times)
    assert threaded.workers == 4


def test_table_cache_directory(tmpdir, small_grid, mixed_model, exponential_data):
    """Tables can come from a disk cache."""
    controls = StepControls(t_end=0.01)
    plain = run(small_grid, mixed_model, exponential_data, controls, force=True)
    cached = run(
        small_grid, mixed_model, exponential_data, controls, force=True, cache_directory=str(tmpdir.join("tables"))
    )
    np.testing.assert_array_equal(plain.densities, cached.densities)
