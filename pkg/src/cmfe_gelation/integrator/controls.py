"""Step size and output controls of a run."""

from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

from cmfe_gelation.integrator.exceptions import CMFEControlsError
from cmfe_gelation.validation import validate_nonnegative, validate_positive


@dataclass(frozen=True)
class StepControls:  # pylint: disable=too-many-instance-attributes
    """
    :param t_end: Horizon.
    :param theta: Max relative change of an active cell per step.
    :param dt_min: Smallest step. Steps limited by it are flagged stiff.
    :param dt_max: Largest step.
    :param record_every: Output cadence, ``t_end / 100`` by default.
    :param clamp_tol: Relative negativity an active cell may reach before the step is retried.
    :param max_steps: Accepted steps before the run gives up and is flagged truncated.
    :param activity_floor: Cells holding less than this fraction of the mass do not limit the step.
    :param stability: Max product of the step and the relative loss rate of an active cell.
    :param stop_gel_fraction: Stop once the gel holds this fraction of the initial mass.
    :param snapshot_times: Times at which full densities are kept for output.
    """

    t_end: float = 1.0
    theta: float = 0.1
    dt_min: float = 1e-12
    dt_max: float = 0.1
    record_every: Optional[float] = None
    clamp_tol: float = 1e-13
    max_steps: int = 5_000_000
    activity_floor: float = 1e-12
    stability: float = 1.0
    stop_gel_fraction: Optional[float] = None
    snapshot_times: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        validate_nonnegative("t_end", self.t_end, CMFEControlsError)
        theta = validate_positive("theta", self.theta, CMFEControlsError)
        if theta >= 1:
            raise CMFEControlsError(f"theta must be below 1, got {theta}")
        dt_min = validate_positive("dt_min", self.dt_min, CMFEControlsError)
        dt_max = validate_positive("dt_max", self.dt_max, CMFEControlsError)
        if dt_min > dt_max:
            raise CMFEControlsError(f"dt_min {dt_min} exceeds dt_max {dt_max}")
        if self.record_every is None:
            object.__setattr__(self, "record_every", self.t_end / 100.0 if self.t_end > 0 else 1.0)
        validate_positive("record_every", self.record_every, CMFEControlsError)
        validate_nonnegative("clamp_tol", self.clamp_tol, CMFEControlsError)
        validate_nonnegative("activity_floor", self.activity_floor, CMFEControlsError)
        validate_positive("stability", self.stability, CMFEControlsError)
        if int(self.max_steps) < 1:
            raise CMFEControlsError(f"max_steps must be positive, got {self.max_steps}")
        if self.stop_gel_fraction is not None:
            validate_positive("stop_gel_fraction", self.stop_gel_fraction, CMFEControlsError)
        times = tuple(sorted(validate_nonnegative("snapshot_times", t, CMFEControlsError) for t in self.snapshot_times))
        object.__setattr__(self, "snapshot_times", times)

    def to_dict(self) -> dict:
        """Plain representation for configs and manifests."""
        result = asdict(self)
        result["snapshot_times"] = list(self.snapshot_times)
        return result
