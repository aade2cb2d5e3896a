"""
Run configuration.

A configuration is a TOML (or JSON) document with the sections ``[model]``,
``[grid]``, ``[initial]``, ``[controls]``, ``[analysis]`` and ``[output]``.
Every key is either given or defaulted; unknown keys and wrong types are
rejected with the section, key and line they were found on.
"""

import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import Any, Dict, List, Mapping, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from cmfe_gelation.analysis import CURVES, DEFAULT_GEL_TOLERANCE, DEFAULT_TOLERANCE
from cmfe_gelation.cli.exceptions import CMFEConfigError
from cmfe_gelation.exceptions import CMFEException
from cmfe_gelation.grid import Grid, InitialDataSpec, build_grid, initial_data_from_dict
from cmfe_gelation.integrator import StepControls
from cmfe_gelation.kernels import KernelModel, PhiSpec, validate_model

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

LOG = getLogger(__name__)

SECTIONS = ("model", "grid", "initial", "controls", "analysis", "output")
BOUND_NAMES = CURVES + ("cmfe_limit",)

# pydantic error type -> type name used in messages
_TYPE_NAMES = {
    "float_type": "float",
    "int_type": "int",
    "bool_type": "bool",
    "string_type": "str",
    "list_type": "list",
    "dict_type": "table",
    "model_type": "table",
}


class _Section(BaseModel):
    """One table of the document. Unknown keys and implicit conversions are rejected."""

    model_config = ConfigDict(extra="forbid", strict=True)


class PhiSection(_Section):
    """``phi`` inline table of ``[model]``."""

    kind: str = "zero"
    phi0: float = 0.0
    decay: float = 0.0


class ModelSection(_Section):
    """``[model]``: rate-law parameters."""

    sigma: float
    gamma: float
    k1: float = 1.0
    k3: float = 0.0
    gamma_poly: List[float] = [1.0]
    lambda_growth: Optional[float] = None
    phi: Dict[str, Any] = Field(default_factory=dict)
    kernel_form: str = "piecewise"
    selection_form: str = "zero"


class GridSection(_Section):
    """``[grid]``: geometric grid."""

    m_min: float
    m_max: float
    cells_per_decade: float = 20.0
    coag_min: Optional[float] = None


class ControlsSection(_Section):
    """``[controls]``: step controls and the worker count."""

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
    workers: int = Field(1, ge=1)


class AnalysisSection(_Section):
    """``[analysis]``: bound branches and check tolerances."""

    bounds: Optional[List[str]] = None
    p: Optional[float] = None
    delta: Optional[float] = None
    lambda_cut: float = Field(2.0, gt=1.0)
    tolerance: float = DEFAULT_TOLERANCE
    gel_tolerance: float = DEFAULT_GEL_TOLERANCE
    window: Optional[List[float]] = None
    force: bool = False
    top_edges: Optional[List[float]] = None
    bound_times: Optional[List[float]] = None

    @field_validator("bounds")
    @classmethod
    def _known_bounds(cls, value):
        unknown = sorted(set(value or ()) - set(BOUND_NAMES))
        if unknown:
            raise ValueError(f"unknown bound {unknown[0]!r}")
        return value

    @field_validator("window")
    @classmethod
    def _ordered_window(cls, value):
        if value is not None and (len(value) != 2 or value[0] > value[1]):
            raise ValueError(f"expected [start, end], got {value}")
        return value


class OutputSection(_Section):
    """``[output]``: where and what to write."""

    directory: str = "cmfe-output"
    snapshot_times: List[float] = []
    cache_dir: Optional[str] = None

# admissibility condition -> model key it is reported on
CONDITION_KEYS = {
    "gamma-range": "gamma",
    "sigma-range": "sigma",
    "rate-constants": "k1",
    "gamma-poly": "gamma_poly",
    "k2": "gamma",
    "p-interval": "sigma",
    "eta": "gamma",
    "phi-decay": "phi",
    "growth-bound": "lambda_growth",
}

_SECTION_RE = re.compile(r"^\s*\[\s*([A-Za-z0-9_.\-]+)\s*\]\s*(#.*)?$")
_KEY_RE = re.compile(r"^\s*([A-Za-z0-9_\-]+)\s*=")


@dataclass(frozen=True)
class GridSettings:
    """Geometric grid parameters."""

    m_min: float
    m_max: float
    cells_per_decade: float = 20.0
    coag_min: Optional[float] = None

    def build(self) -> Grid:
        """The grid these settings describe."""
        return build_grid(self.m_min, self.m_max, self.cells_per_decade, coag_min=self.coag_min)


@dataclass(frozen=True)
class AnalysisSettings:  # pylint: disable=too-many-instance-attributes
    """Bound branches, their inputs and check tolerances."""

    bounds: Optional[Tuple[str, ...]] = None
    p: Optional[float] = None
    delta: Optional[float] = None
    lambda_cut: float = 2.0
    tolerance: float = DEFAULT_TOLERANCE
    gel_tolerance: float = DEFAULT_GEL_TOLERANCE
    window: Optional[Tuple[float, float]] = None
    force: bool = False
    top_edges: Optional[Tuple[float, ...]] = None
    bound_times: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class OutputSettings:
    """Where and what to write."""

    directory: str = "cmfe-output"
    snapshot_times: Tuple[float, ...] = ()
    cache_dir: Optional[str] = None


@dataclass(frozen=True)
class RunConfig:  # pylint: disable=too-many-instance-attributes
    """Fully resolved configuration."""

    model: KernelModel
    grid: GridSettings
    initial: InitialDataSpec
    controls: StepControls
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    workers: int = 1
    source: str = "<memory>"

    def replace(self, **changes) -> "RunConfig":
        """Copy with some fields changed."""
        return replace(self, **changes)

    def resolved(self) -> dict:
        """Plain representation with every default filled in. Parses back to an equal config."""
        controls = self.controls.to_dict()
        controls.pop("snapshot_times")
        controls["workers"] = self.workers
        analysis = {
            "lambda_cut": self.analysis.lambda_cut,
            "tolerance": self.analysis.tolerance,
            "gel_tolerance": self.analysis.gel_tolerance,
            "force": self.analysis.force,
        }
        for name in ("bounds", "p", "delta", "window", "top_edges", "bound_times"):
            value = getattr(self.analysis, name)
            if value is not None:
                analysis[name] = list(value) if isinstance(value, tuple) else value
        output = {"directory": self.output.directory, "snapshot_times": list(self.output.snapshot_times)}
        if self.output.cache_dir is not None:
            output["cache_dir"] = self.output.cache_dir
        model = {key: value for key, value in self.model.to_dict().items() if value is not None}
        grid = {key: value for key, value in vars(self.grid).items() if value is not None}
        return {
            "model": model,
            "grid": grid,
            "initial": self.initial.to_dict(),
            "controls": {key: value for key, value in controls.items() if value is not None},
            "analysis": analysis,
            "output": output,
        }

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of :meth:`resolved`."""
        canonical = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class _Locator:
    """Line numbers of sections and keys in the raw text."""

    def __init__(self, text: str, source: str, is_json: bool):
        self.source = source
        self._lines: Dict[Tuple[str, Optional[str]], int] = {}
        if is_json:
            self._scan_json(text)
        else:
            self._scan_toml(text)

    def _scan_toml(self, text: str):
        section = ""
        for number, line in enumerate(text.splitlines(), start=1):
            header = _SECTION_RE.match(line)
            if header:
                section = header.group(1)
                self._lines.setdefault((section, None), number)
                continue
            key = _KEY_RE.match(line)
            if key:
                self._lines.setdefault((section, key.group(1)), number)

    def _scan_json(self, text: str):
        section = ""
        for number, line in enumerate(text.splitlines(), start=1):
            for name in re.findall(r'"([A-Za-z0-9_\-]+)"\s*:', line):
                if name in SECTIONS:
                    section = name
                    self._lines.setdefault((section, None), number)
                else:
                    self._lines.setdefault((section, name), number)

    def where(self, section: str, key: Optional[str] = None) -> str:
        """``source:line`` of a key, falling back to its section."""
        line = self._lines.get((section, key)) or self._lines.get((section, None))
        return f"{self.source}:{line}" if line else self.source

    def error(self, section: str, key: Optional[str], message: str) -> CMFEConfigError:
        """Config error citing section, key and line."""
        name = f"[{section}]" if key is None else f"[{section}] {key}"
        return CMFEConfigError(f"{self.where(section, key)}: {name}: {message}")


def _message(error: Mapping) -> str:
    kind = error["type"]
    value = error.get("input")
    if kind == "extra_forbidden":
        return f"unknown key {error['loc'][-1]!r}"
    if kind == "missing":
        return "missing required key"
    if kind in _TYPE_NAMES:
        return f"expected {_TYPE_NAMES[kind]}, got {type(value).__name__} {value!r}"
    if kind == "value_error":
        return str(error["ctx"]["error"])
    return f"{error['msg'].lower()}, got {value!r}"


def _section(data: Mapping, name: str, schema: Type[_Section], locator: _Locator, prefix: str = "") -> _Section:
    """
    Validate one section against its schema.

    Of several problems the first unknown key is reported, otherwise the
    first problem in field order.
    """
    try:
        return schema.model_validate(data.get(name, {}))
    except ValidationError as err:
        error = min(err.errors(), key=lambda item: item["type"] != "extra_forbidden")
        keys = [part for part in error["loc"] if isinstance(part, str)]
        label = ".".join([prefix + name] + keys[:-1])
        raise locator.error(label, keys[-1] if keys else None, _message(error)) from err


def _model(data: Mapping, locator: _Locator) -> KernelModel:
    section = _section(data, "model", ModelSection, locator)
    phi = _section(section.model_dump(), "phi", PhiSection, locator, prefix="model.")
    try:
        return KernelModel(
            sigma=section.sigma,
            gamma=section.gamma,
            k1=section.k1,
            k3=section.k3,
            gamma_poly=tuple(section.gamma_poly),
            lambda_growth=section.lambda_growth,
            phi=PhiSpec(**phi.model_dump()),
            kernel_form=section.kernel_form,
            selection_form=section.selection_form,
        )
    except CMFEException as err:
        raise locator.error("model", None, str(err)) from err


def _initial(data: Mapping, locator: _Locator, base_directory: str) -> InitialDataSpec:
    raw = data.get("initial")
    if not isinstance(raw, dict) or "kind" not in raw:
        raise locator.error("initial", "kind", "missing initial data kind")
    raw = dict(raw)
    if raw["kind"] == "table" and isinstance(raw.get("path"), str):
        raw["path"] = os.path.abspath(os.path.join(base_directory, raw["path"]))
    try:
        return initial_data_from_dict(raw)
    except (CMFEException, OSError) as err:
        key = "path" if isinstance(err, OSError) else "kind"
        raise locator.error("initial", key, str(err)) from err


def _check_admissible(model: KernelModel, locator: _Locator):
    report = validate_model(model)
    if report.passed:
        return
    first = report.failures[0]
    details = ", ".join(f"{result.condition} ({result.value:.6g})" for result in report.failures)
    raise locator.error("model", CONDITION_KEYS.get(first.condition), f"inadmissible model: {details}")


def config_from_dict(  # pylint: disable=too-many-locals
    data: Mapping,
    validate: bool = True,
    source: str = "<memory>",
    locator: Optional[_Locator] = None,
    base_directory: str = ".",
) -> RunConfig:
    """
    Resolve a parsed configuration document.

    :param data: Sections as nested mappings.
    :param validate: Reject inadmissible models unless ``analysis.force`` is set.
    :param source: Name used in error messages.
    :param base_directory: Directory relative table paths are resolved against.
    :rtype: RunConfig
    :raises CMFEConfigError: On unknown keys, type mismatches or an inadmissible combination.
    """
    locator = locator or _Locator("", source, is_json=True)
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise locator.error(unknown[0], None, "unknown section")

    model = _model(data, locator)
    grid_section = _section(data, "grid", GridSection, locator)
    controls_section = _section(data, "controls", ControlsSection, locator)
    analysis_section = _section(data, "analysis", AnalysisSection, locator)
    output_section = _section(data, "output", OutputSection, locator)
    initial = _initial(data, locator, base_directory)

    grid = GridSettings(**grid_section.model_dump())
    try:
        grid.build()
    except CMFEException as err:
        raise locator.error("grid", None, str(err)) from err

    try:
        controls = StepControls(
            **controls_section.model_dump(exclude={"workers"}),
            snapshot_times=tuple(output_section.snapshot_times),
        )
    except CMFEException as err:
        raise locator.error("controls", None, str(err)) from err

    analysis = AnalysisSettings(
        **{
            key: tuple(value) if isinstance(value, list) else value
            for key, value in analysis_section.model_dump().items()
        }
    )
    output = OutputSettings(
        directory=output_section.directory,
        snapshot_times=controls.snapshot_times,
        cache_dir=output_section.cache_dir,
    )

    if validate and not analysis.force:
        _check_admissible(model, locator)

    return RunConfig(
        model=model,
        grid=grid,
        initial=initial,
        controls=controls,
        analysis=analysis,
        output=output,
        workers=controls_section.workers,
        source=source,
    )


def parse_config(path: str, validate: bool = True) -> RunConfig:
    """
    Read and resolve a configuration file.

    Files ending in ``.json`` are read as JSON (e.g. an echoed
    ``resolved_config.json``), everything else as TOML.

    :param path: Configuration file.
    :param validate: Reject inadmissible models unless ``analysis.force`` is set.
    :rtype: RunConfig
    :raises CMFEConfigError: If the file cannot be read or parsed, has unknown keys,
        wrong types or an inadmissible combination.
    """
    try:
        with open(path, encoding="utf-8") as fp:
            text = fp.read()
    except OSError as err:
        raise CMFEConfigError(f"{path}: cannot read configuration: {err}") from err

    is_json = path.endswith(".json")
    try:
        data = json.loads(text) if is_json else tomllib.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as err:
        raise CMFEConfigError(f"{path}: not valid {'JSON' if is_json else 'TOML'}: {err}") from err
    if not isinstance(data, dict):
        raise CMFEConfigError(f"{path}: expected a document of sections")

    locator = _Locator(text, path, is_json)
    config = config_from_dict(
        data,
        validate=validate,
        source=path,
        locator=locator,
        base_directory=os.path.dirname(os.path.abspath(path)),
    )
    LOG.debug("Parsed %s, config hash %s", path, config.config_hash())
    return config

