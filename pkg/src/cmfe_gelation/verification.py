"""
Acceptance suites.

Each suite builds its own configurations, runs them and returns a list of
:class:`~cmfe_gelation.analysis.BoundVerdict`. :func:`run_suites` runs a
selection of them, each under its wall-clock budget, and reports one
:class:`SuiteVerdict` per suite. ``cmfe-gelation verify`` and the slow
acceptance tests both go through it.
"""

import math
import time
from dataclasses import dataclass, field
from logging import getLogger
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre

from cmfe_gelation.analysis import (
    BoundVerdict,
    InitialStats,
    ThetaForm,
    apriori_check,
    apriori_estimates,
    check_simulation_against_bounds,
    collision_integrals,
    compare,
    estimate_gel_time,
    initial_stats,
    moment_balance_residual,
    support_gap_preserved,
    theoretical_bounds,
)
from cmfe_gelation.exceptions import CMFEException, CMFEValidationError
from cmfe_gelation.grid import (
    DensityState,
    ExponentialData,
    Grid,
    MonodisperseData,
    ShiftedData,
    build_grid,
)
from cmfe_gelation.integrator import MOMENT_NAMES, SimulationResult, StepControls, run, step
from cmfe_gelation.kernels import (
    KernelForm,
    KernelModel,
    PhiKind,
    PhiSpec,
    SelectionForm,
    fragment_mass_in,
    fragment_number_in,
    singular_fragment_moment,
)
from cmfe_gelation.scheme import SectionalScheme
from cmfe_gelation.timeout import wall_clock_limit

LOG = getLogger(__name__)

LEDGER_TOLERANCE = 1e-8
CLOSED_FORM_TOLERANCE = 1e-12
RHS_TOLERANCE = 1e-12
TRAJECTORY_TOLERANCE = 1e-6
GAUSS_POINTS = 64

# Geometric grids whose cell around m = 1 has its pivot exactly at 1.
UNIT_PIVOT_BOTTOM = 10.0**-1.025
UNIT_PIVOT_SHIFT = 10.0**-0.025

UNIT_PHI = PhiSpec(PhiKind.POWER, phi0=1.0, decay=1.0)


@dataclass(frozen=True)
class SuiteVerdict:
    """
    :param name: Suite name.
    :param passed: True iff every check held and nothing raised.
    :param wall_clock: Seconds spent.
    :param budget: Wall-clock limit in seconds.
    :param checks: Individual verdicts.
    :param error: Message of the exception that aborted the suite.
    """

    name: str
    passed: bool
    wall_clock: float
    budget: int
    checks: Tuple[BoundVerdict, ...] = field(default_factory=tuple)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        """Plain representation for manifests."""
        return {
            "name": self.name,
            "passed": self.passed,
            "wall_clock": self.wall_clock,
            "budget": self.budget,
            "checks": [check.to_dict() for check in self.checks],
            "error": self.error,
        }


def _at_most(name: str, value: float, limit: float) -> BoundVerdict:
    ratio = value / limit if limit > 0 else (0.0 if value <= 0 else math.inf)
    return BoundVerdict(name, bool(value <= limit), float(ratio), 1)


def _at_least(name: str, value: float, limit: float) -> BoundVerdict:
    ratio = limit / value if value > 0 else math.inf
    return BoundVerdict(name, bool(value >= limit), float(ratio), 1)


def _simulate(  # pylint: disable=too-many-arguments
    grid: Grid, model: KernelModel, initial, workers: int = 1, **controls
) -> SimulationResult:
    return run(grid, model, initial, StepControls(**controls), force=True, workers=workers)


def _product_kernel(growth=(0.0, 1.0), lambda_growth=None, gamma=-0.5, **changes) -> KernelModel:
    return KernelModel(
        sigma=0.0,
        gamma=gamma,
        gamma_poly=growth,
        lambda_growth=lambda_growth,
        kernel_form=KernelForm.PRODUCT_SINGULAR,
        **changes,
    )


def _unit_pivot_grid(top: float) -> Grid:
    return build_grid(UNIT_PIVOT_BOTTOM, top * UNIT_PIVOT_SHIFT, 20)


def suite_ledger_closure() -> List[BoundVerdict]:
    """Mass ledger closes to 1e-8 of the initial mass at every record."""
    cases = {
        "ledger_constant_kernel": (
            build_grid(UNIT_PIVOT_BOTTOM, 1e3 * UNIT_PIVOT_SHIFT, 20),
            _product_kernel(growth=(1.0,)),
            MonodisperseData(1.0, 1.0),
        ),
        "ledger_gelling": (build_grid(1e-3, 1e2, 20), _product_kernel(), ExponentialData(1.0, 1.0)),
        "ledger_fragmenting": (
            build_grid(1e-3, 1e2, 20),
            KernelModel(
                sigma=0.1,
                gamma=0.0,
                k3=0.5,
                gamma_poly=(1.0, 1.0),
                phi=UNIT_PHI,
                selection_form=SelectionForm.POWER_BOUND,
            ),
            ExponentialData(1.0, 1.0),
        ),
    }
    verdicts = []
    for name, (grid, model, initial) in cases.items():
        result = _simulate(grid, model, initial, t_end=1.0, record_every=0.05)
        verdicts.append(_at_most(name, float(np.max(result.ledger_residual())), LEDGER_TOLERANCE))
    return verdicts


def _gauss_power_integral(a: float) -> float:
    """``int_0^1 u^a du`` for ``a > -1`` by Gauss-Legendre after ``u = s^q``."""
    q = math.ceil(11.0 / (a + 1.0))
    nodes, weights = legendre.leggauss(GAUSS_POINTS)
    s = 0.5 * (nodes + 1.0)
    return float(0.5 * np.sum(weights * q * s ** (q * (a + 1.0) - 1.0)))


def suite_breakage_closed_forms(samples: int = 1000, seed: int = 20240601) -> List[BoundVerdict]:
    """Closed-form breakup integrals agree with quadrature on random admissible parameters."""
    rng = np.random.default_rng(seed)
    worst = {"fragment_number": 0.0, "fragment_mass": 0.0, "singular_moment": 0.0}
    for _ in range(samples):
        gamma = -rng.uniform(0.0, 0.95)
        sigma = rng.uniform(0.0, 0.999 * (1.0 + gamma) / 2.0)
        m_star = 10.0 ** rng.uniform(-3.0, 3.0)
        model = KernelModel(sigma=sigma, gamma=gamma)

        number = fragment_number_in(0.0, m_star, m_star, model)
        mass = fragment_mass_in(0.0, m_star, m_star, model)
        singular = singular_fragment_moment(m_star, model)

        expected_number = (gamma + 2.0) * _gauss_power_integral(gamma)
        expected_mass = m_star * (gamma + 2.0) * _gauss_power_integral(gamma + 1.0)
        expected_singular = m_star ** (-2.0 * sigma) * (gamma + 2.0) * _gauss_power_integral(gamma - 2.0 * sigma)
        for name, value, expected, exact in (
            ("fragment_number", number, expected_number, model.eta),
            ("fragment_mass", mass, expected_mass, m_star),
            ("singular_moment", singular, expected_singular, model.k2 * m_star ** (-2.0 * sigma)),
        ):
            error = max(abs(value - expected) / abs(expected), abs(value - exact) / abs(exact))
            worst[name] = max(worst[name], error)
    return [_at_most(name, error, CLOSED_FORM_TOLERANCE) for name, error in worst.items()]


def three_pivot_grid() -> Grid:
    """Cells ``[0.5, 1.5), [1.5, 2.5), [2.5, 3.5)`` with pivots 1, 2, 3."""
    return Grid.from_edges([0.5, 1.5, 2.5, 3.5], pivots=[1.0, 2.0, 3.0])


def discrete_smoluchowski(numbers: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """
    Brute-force right-hand side of the discrete coagulation equation on
    masses 1, 2, 3. Collisions producing mass 4 or more leave the system.
    """
    n1, n2, _ = numbers
    loss = numbers * (kernel @ numbers)
    return np.array(
        [
            -loss[0],
            0.5 * kernel[0, 0] * n1 * n1 - loss[1],
            kernel[0, 1] * n1 * n2 - loss[2],
        ]
    )


def _rk4(numbers: np.ndarray, kernel: np.ndarray, t_end: float, dt: float) -> np.ndarray:
    for _ in range(int(round(t_end / dt))):
        k_1 = discrete_smoluchowski(numbers, kernel)
        k_2 = discrete_smoluchowski(numbers + 0.5 * dt * k_1, kernel)
        k_3 = discrete_smoluchowski(numbers + 0.5 * dt * k_2, kernel)
        k_4 = discrete_smoluchowski(numbers + dt * k_3, kernel)
        numbers = numbers + dt / 6.0 * (k_1 + 2.0 * k_2 + 2.0 * k_3 + k_4)
    return numbers


def heun_trajectory(scheme: SectionalScheme, initial: np.ndarray, t_end: float, dt: float) -> np.ndarray:
    """Densities after fixed Heun steps of size ``dt``."""
    controls = StepControls(t_end=t_end, dt_min=min(dt, 1e-12), dt_max=max(dt, 0.1))
    state = DensityState(g=np.asarray(initial, dtype=float))
    for _ in range(int(round(t_end / dt))):
        state = step(state, scheme, controls, dt=dt).state
    return state.g


def suite_small_system_oracle(dt: float = 2.5e-4) -> List[BoundVerdict]:
    """Scheme agrees with a hand-assembled three-mass system for K = 1 and K = m m*."""
    grid = three_pivot_grid()
    masses = grid.pivots
    initial = np.array([1.0, 0.5, 0.25])
    verdicts = []
    for name, growth in (("constant", (1.0,)), ("product", (0.0, 1.0))):
        model = _product_kernel(growth=growth, gamma=0.0)
        kernel = np.outer(model.growth(masses), model.growth(masses))
        with SectionalScheme(grid, model) as scheme:
            computed = scheme(DensityState(g=initial)).dgdt * grid.widths
            expected = discrete_smoluchowski(initial, kernel)
            scale = float(np.max(np.abs(expected)))
            verdicts.append(_at_most(f"rhs_{name}", float(np.max(np.abs(computed - expected))) / scale, RHS_TOLERANCE))

            final = heun_trajectory(scheme, initial, 1.0, dt) * grid.widths
        reference = _rk4(initial, kernel, 1.0, 1e-3)
        verdicts.append(
            _at_most(f"trajectory_{name}", float(np.max(np.abs(final - reference))), TRAJECTORY_TOLERANCE)
        )
    return verdicts


def suite_pregel_conservation() -> List[BoundVerdict]:
    """K = m m* with exponential data conserves mass well before the gel time 1/M2(0) = 0.5."""
    result = _simulate(
        build_grid(1e-3, 1e5, 20),
        _product_kernel(),
        ExponentialData(1.0, 1.0),
        t_end=0.2,
        record_every=0.01,
    )
    n1 = result.moments["N1"]
    drift = float(np.max(np.abs(n1 - n1[0]))) / result.n1_initial
    return [
        _at_most("mass_drift", drift, 1e-3),
        _at_most("gel_mass", float(result.ledger["gel_mass"][-1]) / result.n1_initial, 1e-6),
    ]


def gel_time_levels(tops: Sequence[float] = (1e3, 1e4, 1e5)) -> List[SimulationResult]:
    """K = m m* runs from monodisperse unit data on increasing top edges."""
    model = _product_kernel(gamma=0.0)
    return [
        _simulate(
            _unit_pivot_grid(top),
            model,
            MonodisperseData(1.0, 1.0),
            t_end=2.0,
            record_every=0.005,
            stop_gel_fraction=1e-3,
        )
        for top in tops
    ]


def suite_gel_time() -> List[BoundVerdict]:
    """Extrapolated gel time of K = m m* lies within 10% of 1."""
    estimate = estimate_gel_time(gel_time_levels())
    LOG.info("Gel time: %s", estimate)
    if not estimate.detected:
        return [BoundVerdict("gel_time", False, math.inf, 0)]
    error = abs(estimate.estimate - 1.0)
    return [BoundVerdict("gel_time", error <= 0.1, error / 0.1, len(estimate.top_edges))]


def _growth_two(**changes) -> KernelModel:
    return _product_kernel(growth=(0.0, 2.0), lambda_growth=2.0, **changes)


def suite_coagulation_envelope() -> List[BoundVerdict]:
    """N1 stays below the inverse square root envelope on [0.5, 20]."""
    model = _growth_two()
    grid = _unit_pivot_grid(1e2)
    result = _simulate(grid, model, MonodisperseData(1.0, 1.0), t_end=20.0, record_every=0.1)
    stats = initial_stats(result, grid, model)
    report = theoretical_bounds(model, stats, times=result.times, branches=("coag_sqrt",))
    return check_simulation_against_bounds(result, report, window=(0.5, 20.0), names=("coag_sqrt",))


def suite_support_gap_envelope() -> List[BoundVerdict]:
    """Data vanishing below delta = 1 obeys the delta envelope and keeps the gap empty."""
    model = _growth_two()
    grid = build_grid(1e-2, 1e2, 20)
    delta = 1.0
    result = _simulate(
        grid, model, ShiftedData(delta, ExponentialData(1.0, 1.0)), t_end=20.0, record_every=0.1
    )
    stats = initial_stats(result, grid, model)
    report = theoretical_bounds(model, stats, delta=delta, times=result.times, branches=("coag_delta",))
    verdicts = check_simulation_against_bounds(result, report, window=(1.0, 20.0), names=("coag_delta",))
    verdicts.append(support_gap_preserved(result, delta))
    return verdicts


def suite_long_time_envelope() -> List[BoundVerdict]:
    """With weak linear-bound fragmentation N1 decays below the closed-form limit."""
    model = _growth_two(
        gamma=0.0,
        k3=0.1,
        phi=UNIT_PHI,
        selection_form=SelectionForm.LINEAR_BOUND,
    )
    grid = build_grid(1e-3, 1e2, 20)
    result = _simulate(grid, model, MonodisperseData(1.0, 1.0), t_end=200.0, record_every=1.0)
    stats = initial_stats(result, grid, model)
    report = theoretical_bounds(model, stats, times=result.times, branches=("cmfe_t",))
    verdicts = check_simulation_against_bounds(result, report, window=(1.0, 200.0), names=("cmfe_t",))
    verdicts += check_simulation_against_bounds(
        result, report, window=(200.0, 200.0), tolerance=0.10, names=("cmfe_limit",)
    )
    return verdicts


APRIORI_MATRIX = (
    (0.1, 0.0, 0.5),
    (0.1, -0.3, 1.0),
    (0.1, -0.5, 0.2),
    (0.25, 0.0, 0.5),
    (0.25, -0.3, 1.0),
    (0.25, -0.4, 0.2),
)


def suite_apriori_bounds(horizon: float = 5.0, lambda_cut: float = 2.0) -> List[BoundVerdict]:
    """Uniform moment bound and collision integrals stay below the a-priori constants."""
    grid = build_grid(1e-4, 1e2, 10)
    verdicts = []
    for sigma, gamma, k3 in APRIORI_MATRIX:
        model = KernelModel(
            sigma=sigma,
            gamma=gamma,
            k3=k3,
            gamma_poly=(1.0, 1.0),
            phi=UNIT_PHI,
            selection_form=SelectionForm.POWER_BOUND,
        )
        result = _simulate(grid, model, ExponentialData(1.0, 1.0), t_end=horizon, record_every=0.05)
        stats = initial_stats(result, grid, model)
        apriori = apriori_estimates(model, stats.q, stats.n1_in, horizon, lambda_cut)
        label = f"sigma={sigma:g},gamma={gamma:g},k3={k3:g}"
        uniform = apriori_check(result, apriori)
        verdicts.append(BoundVerdict(f"uniform[{label}]", uniform.holds, uniform.max_ratio, uniform.points))
        for check in collision_integrals(result, lambda_cut).verdicts(apriori)[:2]:
            verdicts.append(BoundVerdict(f"{check.name}[{label}]", check.holds, check.max_ratio, check.points))
    return verdicts


def _mixed_model() -> KernelModel:
    return KernelModel(
        sigma=0.1,
        gamma=0.0,
        k1=0.5,
        k3=0.1,
        gamma_poly=(1.0,),
        phi=UNIT_PHI,
        selection_form=SelectionForm.LINEAR_BOUND,
    )


def mixed_run(cells_per_decade: float = 20, theta: float = 0.1, record_every: float = 0.01, workers: int = 1):
    """Coagulation with fragmentation from exponential data up to t = 1."""
    return _simulate(
        build_grid(1e-3, 1e2, cells_per_decade),
        _mixed_model(),
        ExponentialData(1.0, 1.0),
        workers=workers,
        t_end=1.0,
        theta=theta,
        record_every=record_every,
    )


def suite_identity_residual() -> List[BoundVerdict]:
    """Number identity residual is small and shrinks when cells and steps are halved."""
    coarse = float(np.max(moment_balance_residual(mixed_run(), ThetaForm.CONSTANT_ONE)))
    fine = float(np.max(moment_balance_residual(mixed_run(40, 0.05, 0.005), ThetaForm.CONSTANT_ONE)))
    LOG.info("Identity residual %.3g coarse, %.3g refined", coarse, fine)
    ratio = coarse / fine if fine > 0 else math.inf
    return [_at_most("residual", coarse, 1e-3), _at_least("refinement_ratio", ratio, 1.5)]


def suite_analytic_values(tolerance: float = 1e-9) -> List[BoundVerdict]:
    """Bound formulas reproduce hand-computed values."""
    model = _growth_two(gamma=0.0, k3=0.1, phi=UNIT_PHI, selection_form=SelectionForm.LINEAR_BOUND)
    stats = InitialStats(n0_in=1.0, n1_in=1.0, q=2.0, i_p=math.log(2.0), p=1.0)
    report = theoretical_bounds(model, stats, p=1.0, delta=1.0, times=(2.0, 4.0))
    checks = (
        ("coag_sqrt", float(report.evaluate("coag_sqrt", 4.0)), math.sqrt(2.0) / 4.0),
        ("t_dagger", report.t_dagger, 6.0 / math.sqrt(math.log(2.0))),
        ("coag_delta", float(report.evaluate("coag_delta", 2.0)), math.sqrt(0.2)),
        ("cmfe_limit", report.cmfe_limit, 0.05),
    )
    return [compare(name, [abs(value - expected) / expected], [tolerance], 0.0) for name, value, expected in checks]


def suite_determinism(workers: int = 4) -> List[BoundVerdict]:
    """One and many pair-sum threads give bitwise identical moments."""
    serial = mixed_run(record_every=0.05)
    threaded = mixed_run(record_every=0.05, workers=workers)
    identical = serial.times.tobytes() == threaded.times.tobytes() and all(
        serial.moments[name].tobytes() == threaded.moments[name].tobytes() for name in MOMENT_NAMES
    )
    return [BoundVerdict(f"bitwise_1_vs_{workers}", identical, 0.0 if identical else math.inf, serial.times.size)]


SUITES: Tuple[Tuple[str, int, Callable[..., List[BoundVerdict]]], ...] = (
    ("ledger_closure", 60, suite_ledger_closure),
    ("breakage_closed_forms", 10, suite_breakage_closed_forms),
    ("small_system_oracle", 10, suite_small_system_oracle),
    ("pregel_conservation", 60, suite_pregel_conservation),
    ("gel_time", 300, suite_gel_time),
    ("coagulation_envelope", 300, suite_coagulation_envelope),
    ("support_gap_envelope", 300, suite_support_gap_envelope),
    ("long_time_envelope", 600, suite_long_time_envelope),
    ("apriori_bounds", 600, suite_apriori_bounds),
    ("identity_residual", 300, suite_identity_residual),
    ("analytic_values", 10, suite_analytic_values),
    ("determinism", 120, suite_determinism),
)
SUITE_NAMES = tuple(name for name, _, _ in SUITES)


def run_suite(name: str, budget: int, function: Callable[..., List[BoundVerdict]], **kwargs) -> SuiteVerdict:
    """Run one suite under its wall-clock budget. Exceptions fail the suite."""
    started = time.perf_counter()
    LOG.info("Suite %s (budget %d s)", name, budget)
    try:
        with wall_clock_limit(budget, label=name):
            checks = tuple(function(**kwargs))
    except CMFEException as err:
        LOG.error("Suite %s failed: %s", name, err)
        return SuiteVerdict(name, False, time.perf_counter() - started, budget, error=str(err))
    passed = all(check.holds for check in checks)
    elapsed = time.perf_counter() - started
    LOG.info("Suite %s: %s in %.1f s", name, "PASS" if passed else "FAIL", elapsed)
    return SuiteVerdict(name, passed, elapsed, budget, checks)


def run_suites(names: Optional[Sequence[str]] = None, workers: int = 4) -> List[SuiteVerdict]:
    """
    Run acceptance suites in order.

    :param names: Suites to run, all by default.
    :param workers: Thread count compared with the serial run in the determinism suite.
    :raises CMFEValidationError: On an unknown suite name.
    """
    unknown = sorted(set(names or ()) - set(SUITE_NAMES))
    if unknown:
        raise CMFEValidationError(f"Unknown suites: {', '.join(unknown)}. Known: {', '.join(SUITE_NAMES)}")
    verdicts = []
    for name, budget, function in SUITES:
        if names and name not in names:
            continue
        kwargs = {"workers": workers} if function is suite_determinism else {}
        verdicts.append(run_suite(name, budget, function, **kwargs))
    return verdicts
