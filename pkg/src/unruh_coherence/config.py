"""Run configuration: YAML schema, validation, and loading.

A run config is one YAML file::

    scenario:
      family: ghz              # ghz | w
      observers:
        - name: A              # inertial (no motion keys)
        - name: B
          s: 1.0               # squeezing parameter directly, or
        - name: C
          acceleration: 6.2832 # physical (a, omega) pair
          frequency: 1.0
    tolerances:
      epsilon_trunc: 1.0e-10
      rel_tol: 1.0e-10
    sweep:                     # optional, up to 2 axes
      - observer: B
        start: 0.0
        stop: 3.0
        step: 0.1
    outputs:
      - table: total           # total | subsystems | identities | limits
        format: csv            # csv | json
        path: ghz_total.csv
    limits:
      max_dimension: 20000000  # brute-force dimension guard
      include_brute: false     # fill brute-force columns where the guard admits

Validation errors carry the config path of the offending key.
"""

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Tuple

import yaml

from .errors import ConfigurationError
from .rindler import (AccelerationParameter, PhysicalAcceleration,
                      TruncationPolicy, acceleration_parameter)
from .coherence import SeriesTolerance
from .states import DEFAULT_MAX_DIMENSION, Family, Observer, ScenarioConfig

TABLE_KINDS = ("total", "subsystems", "identities", "limits")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class SweepAxis:
    observer: str
    start: float
    stop: float
    step: float

    def grid(self) -> Tuple[float, ...]:
        values = []
        k = 0
        while True:
            v = self.start + k * self.step
            if v > self.stop + 1e-12 * max(1.0, abs(self.stop)):
                break
            values.append(round(v, 12))
            k += 1
        return tuple(values)


@dataclass(frozen=True)
class OutputSpec:
    table: str
    format: str
    path: str


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig
    series_tol: SeriesTolerance
    axes: Tuple[SweepAxis, ...] = ()
    outputs: Tuple[OutputSpec, ...] = ()
    max_dimension: int = DEFAULT_MAX_DIMENSION
    include_brute: bool = False
    config_hash: str = ""
    diagnostics: dict = field(default_factory=dict)


def _fail(path: str, message: str):
    raise ConfigurationError(f"{path}: {message}")


def _require(mapping, key, path, types, default=None, required=False):
    if key not in mapping:
        if required:
            _fail(path, f"missing required key {key!r}")
        return default
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        _fail(f"{path}.{key}", f"expected {types}, got {type(value).__name__}")
    return value


def _as_float(value, path) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {type(value).__name__}")
    return float(value)


def _parse_observer(entry, path, policy_known) -> Observer:
    if not isinstance(entry, dict):
        _fail(path, "observer entries must be mappings")
    name = _require(entry, "name", path, str, required=True)
    has_s = "s" in entry
    has_phys = "acceleration" in entry or "frequency" in entry
    if has_s and has_phys:
        _fail(path, "give either 's' or ('acceleration', 'frequency'), not both")
    motion = entry.get("motion")
    if motion is not None and motion not in ("inertial", "accelerated"):
        _fail(f"{path}.motion", f"must be 'inertial' or 'accelerated', got {motion!r}")
    if motion == "inertial" and (has_s or has_phys):
        _fail(path, "inertial observers cannot carry acceleration parameters")

    unknown = set(entry) - {"name", "motion", "s", "acceleration", "frequency"}
    if unknown:
        _fail(path, f"unknown keys: {sorted(unknown)}")

    if has_s:
        s = _as_float(entry["s"], f"{path}.s")
        if s < 0:
            _fail(f"{path}.s", f"must be >= 0, got {s}")
        return Observer(name, AccelerationParameter(s))
    if has_phys:
        if "acceleration" not in entry or "frequency" not in entry:
            _fail(path, "physical motion needs both 'acceleration' and 'frequency'")
        a = _as_float(entry["acceleration"], f"{path}.acceleration")
        omega = _as_float(entry["frequency"], f"{path}.frequency")
        if a <= 0 or omega <= 0:
            _fail(path, "acceleration and frequency must be positive")
        return Observer(name, acceleration_parameter(PhysicalAcceleration(a, omega)))
    if motion == "accelerated":
        _fail(path, "accelerated observers need 's' or ('acceleration', 'frequency')")
    return Observer(name, None)


def parse_run_config(data: dict, raw_bytes: bytes = b"") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("top level: config must be a mapping")
    unknown = set(data) - {"scenario", "tolerances", "sweep", "outputs", "limits"}
    if unknown:
        _fail("top level", f"unknown sections: {sorted(unknown)}")

    scenario = _require(data, "scenario", "top level", dict, required=True)
    family_str = _require(scenario, "family", "scenario", str, required=True)
    try:
        family = Family(family_str.lower())
    except ValueError:
        _fail("scenario.family", f"must be 'ghz' or 'w', got {family_str!r}")
    observers_raw = _require(scenario, "observers", "scenario", list, required=True)
    observers = tuple(
        _parse_observer(entry, f"scenario.observers[{i}]", None)
        for i, entry in enumerate(observers_raw))
    parties = _require(scenario, "parties", "scenario", int)
    if parties is not None and parties != len(observers):
        _fail("scenario.parties",
              f"{parties} does not match {len(observers)} observer entries")
    unknown = set(scenario) - {"family", "observers", "parties"}
    if unknown:
        _fail("scenario", f"unknown keys: {sorted(unknown)}")

    tolerances = _require(data, "tolerances", "top level", dict, default={})
    unknown = set(tolerances) - {"epsilon_trunc", "rel_tol", "max_terms"}
    if unknown:
        _fail("tolerances", f"unknown keys: {sorted(unknown)}")
    eps = _as_float(tolerances.get("epsilon_trunc", 1e-10), "tolerances.epsilon_trunc")
    rel = _as_float(tolerances.get("rel_tol", 1e-10), "tolerances.rel_tol")
    max_terms = tolerances.get("max_terms", SeriesTolerance().max_terms)
    try:
        policy = TruncationPolicy(epsilon_trunc=eps)
        series_tol = SeriesTolerance(rel_tol=rel, max_terms=int(max_terms))
    except ValueError as exc:
        _fail("tolerances", str(exc))

    try:
        cfg = ScenarioConfig(family, len(observers), observers, policy)
    except ValueError as exc:
        _fail("scenario", str(exc))

    axes = []
    for i, entry in enumerate(_require(data, "sweep", "top level", list, default=[])):
        path = f"sweep[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "sweep axes must be mappings")
        unknown = set(entry) - {"observer", "start", "stop", "step"}
        if unknown:
            _fail(path, f"unknown keys: {sorted(unknown)}")
        name = _require(entry, "observer", path, str, required=True)
        target = next((o for o in observers if o.name == name), None)
        if target is None:
            _fail(f"{path}.observer", f"unknown observer {name!r}")
        if not target.accelerated:
            _fail(f"{path}.observer",
                  f"{name!r} is inertial; sweep axes reference accelerated observers only")
        start = _as_float(_require(entry, "start", path, None, required=True), f"{path}.start")
        stop = _as_float(_require(entry, "stop", path, None, required=True), f"{path}.stop")
        step = _as_float(_require(entry, "step", path, None, required=True), f"{path}.step")
        if step <= 0:
            _fail(f"{path}.step", f"must be > 0, got {step}")
        if stop < start or start < 0:
            _fail(path, f"need 0 <= start <= stop, got [{start}, {stop}]")
        axes.append(SweepAxis(name, start, stop, step))
    if len(axes) > 2:
        _fail("sweep", f"at most 2 axes supported, got {len(axes)}")
    if len({a.observer for a in axes}) != len(axes):
        _fail("sweep", "axes must reference distinct observers")

    outputs = []
    for i, entry in enumerate(_require(data, "outputs", "top level", list, default=[])):
        path = f"outputs[{i}]"
        if not isinstance(entry, dict):
            _fail(path, "output entries must be mappings")
        unknown = set(entry) - {"table", "format", "path"}
        if unknown:
            _fail(path, f"unknown keys: {sorted(unknown)}")
        table = _require(entry, "table", path, str, required=True)
        if table not in TABLE_KINDS:
            _fail(f"{path}.table", f"must be one of {TABLE_KINDS}, got {table!r}")
        fmt = _require(entry, "format", path, str, default="csv")
        if fmt not in FORMATS:
            _fail(f"{path}.format", f"must be one of {FORMATS}, got {fmt!r}")
        out_path = _require(entry, "path", path, str, required=True)
        outputs.append(OutputSpec(table, fmt, out_path))

    limits = _require(data, "limits", "top level", dict, default={})
    unknown = set(limits) - {"max_dimension", "include_brute"}
    if unknown:
        _fail("limits", f"unknown keys: {sorted(unknown)}")
    max_dimension = limits.get("max_dimension", DEFAULT_MAX_DIMENSION)
    if not isinstance(max_dimension, int) or max_dimension < 1:
        _fail("limits.max_dimension", f"must be a positive integer, got {max_dimension!r}")
    include_brute = limits.get("include_brute", False)
    if not isinstance(include_brute, bool):
        _fail("limits.include_brute", f"must be a boolean, got {include_brute!r}")

    return RunConfig(
        scenario=cfg,
        series_tol=series_tol,
        axes=tuple(axes),
        outputs=tuple(outputs),
        max_dimension=max_dimension,
        include_brute=include_brute,
        config_hash=hashlib.sha256(raw_bytes).hexdigest(),
    )


def load_run_config(path) -> RunConfig:
    """Parse and validate a YAML run config; errors carry location context."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return parse_run_config(data, raw)
