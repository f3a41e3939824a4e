"""Scenario configuration files (TOML) and their validation.

Example::

    seed = 1

    [lattice]
    sites = 256
    epsilon = 0.1
    boundary = "periodic"

    [matter]
    mass = 1.0
    charge = 1.0
    initial = { kind = "gaussian", center = 12.8, width = 1.5, k0 = 2.0 }

    [gauge]
    enabled = true
    profile = "from_gauss"

    [run]
    steps = 500
    scheme = "coupled"

    [output]
    path = "run.csv"
    format = "csv"
    observables = ["norm", "total_charge", "gauss_residual", "two_step_residual"]

Validation errors are :class:`~qwgauge.errors.ConfigError` instances whose
``key`` attribute is the dotted path of the offending entry.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .lattice import BOUNDARIES

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10
    import tomli as tomllib

__all__ = [
    "SCHEMES",
    "OBSERVABLES",
    "INITIAL_KINDS",
    "ScenarioConfig",
    "parse_config",
    "load_config",
]

SCHEMES = ("one_step", "two_step_unitary", "two_step_naive", "coupled")
OBSERVABLES = ("norm", "total_charge", "gauss_residual", "two_step_residual")
INITIAL_KINDS = ("plane_wave", "gaussian", "delta", "random")
GAUGE_PROFILES = ("zero", "uniform_E", "from_gauss")
A0_PROFILES = ("zero", "uniform", "table")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario; see the module docstring for the file layout."""

    sites: int
    epsilon: float
    boundary: str
    mass: float
    charge: float
    initial: dict
    steps: int
    scheme: str
    gauge_enabled: bool = False
    gauge_profile: str = "zero"
    gauge_value: float = 0.0
    a0_profile: str = "zero"
    a0_values: tuple = ()
    current: str = "noether"
    output_path: str | None = None
    output_format: str = "csv"
    observables: tuple = OBSERVABLES
    seed: int = 0
    source: dict = field(default_factory=dict, compare=False)


def _table(data, key, path):
    value = data.get(key, {})
    if not isinstance(value, dict):
        raise ConfigError("must be a table", key=path)
    return value


def _number(section, key, path, default=None, *, positive=False, nonnegative=False, integer=False):
    if key not in section:
        if default is None:
            raise ConfigError("is required", key=path)
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"must be a number, got {value!r}", key=path)
    if integer and int(value) != value:
        raise ConfigError(f"must be an integer, got {value!r}", key=path)
    if positive and not value > 0:
        raise ConfigError(f"must be positive, got {value!r}", key=path)
    if nonnegative and value < 0:
        raise ConfigError(f"must be nonnegative, got {value!r}", key=path)
    return int(value) if integer else float(value)


def _choice(section, key, path, options, default):
    value = section.get(key, default)
    if value not in options:
        raise ConfigError(f"must be one of {list(options)}, got {value!r}", key=path)
    return value


def _spinor(value, path):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError("must be a list of two components", key=path)
    out = []
    for i, c in enumerate(value):
        if isinstance(c, (list, tuple)) and len(c) == 2:
            out.append(complex(float(c[0]), float(c[1])))
        elif isinstance(c, (int, float)) and not isinstance(c, bool):
            out.append(complex(c))
        else:
            raise ConfigError("components must be numbers or [re, im] pairs", key=f"{path}[{i}]")
    if abs(out[0]) == 0 and abs(out[1]) == 0:
        raise ConfigError("must not be zero", key=path)
    return tuple(out)


def _initial(matter, sites):
    init = _table(matter, "initial", "matter.initial")
    kind = _choice(init, "kind", "matter.initial.kind", INITIAL_KINDS, "gaussian")
    out = {"kind": kind, "spinor": _spinor(init.get("spinor", [1.0, 0.0]), "matter.initial.spinor")}
    if kind == "plane_wave":
        out["k"] = _number(init, "k", "matter.initial.k", 0.0)
    elif kind == "gaussian":
        out["center"] = _number(init, "center", "matter.initial.center")
        out["width"] = _number(init, "width", "matter.initial.width", positive=True)
        out["k0"] = _number(init, "k0", "matter.initial.k0", 0.0)
    elif kind == "delta":
        site = _number(init, "site", "matter.initial.site", integer=True, nonnegative=True)
        if site >= sites:
            raise ConfigError(f"must be < lattice.sites ({sites})", key="matter.initial.site")
        out["site"] = site
    return out


def parse_config(data: dict) -> ScenarioConfig:
    """Validate a parsed TOML document."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a table")
    lattice = _table(data, "lattice", "lattice")
    matter = _table(data, "matter", "matter")
    gauge = _table(data, "gauge", "gauge")
    run = _table(data, "run", "run")
    output = _table(data, "output", "output")

    sites = _number(lattice, "sites", "lattice.sites", integer=True)
    if sites < 2:
        raise ConfigError("must be at least 2", key="lattice.sites")
    epsilon = _number(lattice, "epsilon", "lattice.epsilon", positive=True)
    boundary = _choice(lattice, "boundary", "lattice.boundary", BOUNDARIES, "periodic")
    mass = _number(matter, "mass", "matter.mass", 0.0, nonnegative=True)
    charge = _number(matter, "charge", "matter.charge", 0.0)
    initial = _initial(matter, sites)

    steps = _number(run, "steps", "run.steps", integer=True, positive=True)
    scheme = _choice(run, "scheme", "run.scheme", SCHEMES, "one_step")

    enabled = gauge.get("enabled", scheme == "coupled")
    if not isinstance(enabled, bool):
        raise ConfigError("must be true or false", key="gauge.enabled")
    profile = _choice(gauge, "profile", "gauge.profile", GAUGE_PROFILES,
                      "from_gauss" if scheme == "coupled" else "zero")
    value = _number(gauge, "value", "gauge.value", 0.0)
    a0_profile = _choice(gauge, "a0_profile", "gauge.a0_profile", A0_PROFILES, "zero")
    a0_values = ()
    if a0_profile in ("uniform", "table"):
        raw = gauge.get("a0_values")
        if raw is None:
            raise ConfigError(f"is required for a0_profile = {a0_profile!r}", key="gauge.a0_values")
        try:
            if a0_profile == "uniform":
                a0_values = tuple(float(v) for v in raw)
                ok = len(a0_values) == steps + 1
            else:
                a0_values = tuple(tuple(float(v) for v in row) for row in raw)
                ok = len(a0_values) == steps + 1 and all(len(r) == sites for r in a0_values)
        except (TypeError, ValueError):
            raise ConfigError("must contain only numbers", key="gauge.a0_values") from None
        if not ok:
            shape = f"{steps + 1}" if a0_profile == "uniform" else f"{steps + 1} x {sites}"
            raise ConfigError(f"must have shape {shape} (steps + 1 slices)", key="gauge.a0_values")
    current = _choice(gauge, "current", "gauge.current", ("noether", "walk"), "noether")

    if scheme == "coupled":
        if not enabled:
            raise ConfigError("coupled runs need the gauge field", key="gauge.enabled")
        if a0_profile != "zero":
            raise ConfigError("coupled runs are in temporal gauge; must be 'zero'", key="gauge.a0_profile")
        if boundary != "periodic":
            raise ConfigError("coupled runs need a periodic lattice", key="lattice.boundary")
    else:
        if profile == "from_gauss":
            raise ConfigError("'from_gauss' is only meaningful for scheme = 'coupled'", key="gauge.profile")
        if enabled and scheme != "one_step":
            raise ConfigError("two-step schemes are run without a gauge field", key="gauge.enabled")

    out_path = output.get("path")
    if out_path is not None and not isinstance(out_path, str):
        raise ConfigError("must be a string", key="output.path")
    fmt = _choice(output, "format", "output.format", FORMATS, "csv")
    observables = output.get("observables", list(OBSERVABLES))
    if not isinstance(observables, list) or any(o not in OBSERVABLES for o in observables):
        raise ConfigError(f"must be a list drawn from {list(OBSERVABLES)}", key="output.observables")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("must be a nonnegative integer", key="seed")

    return ScenarioConfig(
        sites=sites, epsilon=epsilon, boundary=boundary, mass=mass, charge=charge,
        initial=initial, steps=steps, scheme=scheme, gauge_enabled=enabled,
        gauge_profile=profile, gauge_value=value, a0_profile=a0_profile, a0_values=a0_values,
        current=current, output_path=out_path, output_format=fmt,
        observables=tuple(o for o in OBSERVABLES if o in observables), seed=seed, source=data,
    )


def load_config(path) -> ScenarioConfig:
    """Read and validate a TOML scenario file."""
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"configuration file {str(path)!r} not found") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {str(path)!r}: {exc}") from None
    return parse_config(data)
