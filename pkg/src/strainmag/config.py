"""Run configuration: a line-based, unit-checked key/value format.

One assignment per line, `section.key = value [unit]`, `#` starts a
comment.  Every physical quantity must carry an explicit unit suffix;
bare numbers are accepted only for dimensionless, integer and string
keys.  Values are stored internally in SI base units.

Example::

    magnet.major_axis = 100 nm
    magnet.saturation_magnetization = 1e6 A/m
    magnet.magnetostriction = -35 ppm
    sim.time_step = 0.1 ps
    sim.stress = 6.5 MPa
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import ConfigError
from .magnet import MagnetSpec
from .sllg import SimulationConfig
from .energetics import PiezoStack

SECONDS_PER_YEAR = 365.25 * 24 * 3600.0

UNIT_FACTORS: dict[str, dict[str, float]] = {
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9, "pm": 1e-12},
    "time": {
        "s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15,
        "min": 60.0, "h": 3600.0, "day": 86400.0, "year": SECONDS_PER_YEAR,
    },
    "stress": {"Pa": 1.0, "kPa": 1e3, "MPa": 1e6, "GPa": 1e9},
    "magnetization": {"A/m": 1.0, "kA/m": 1e3, "MA/m": 1e6},
    "temperature": {"K": 1.0},
    "area": {"m^2": 1.0, "um^2": 1e-12, "nm^2": 1e-18},
    "piezo_coeff": {"C/N": 1.0, "pC/N": 1e-12},
    "energy": {"J": 1.0, "aJ": 1e-18, "zJ": 1e-21},
    "dimensionless": {"": 1.0, "ppm": 1e-6},
}

#: base unit emitted for each dimension
BASE_UNITS = {
    "length": "m", "time": "s", "stress": "Pa", "magnetization": "A/m",
    "temperature": "K", "area": "m^2", "piezo_coeff": "C/N", "energy": "J",
    "dimensionless": "",
}

# key -> (kind, default).  kind is a dimension name, "int", "str", or
# "list:<dimension>".  Required keys (no usable default) carry None.
SCHEMA: dict[str, tuple[str, Any]] = {
    "magnet.major_axis": ("length", None),
    "magnet.minor_axis": ("length", None),
    "magnet.thickness": ("length", None),
    "magnet.saturation_magnetization": ("magnetization", None),
    "magnet.magnetostriction": ("dimensionless", None),
    "magnet.youngs_modulus": ("stress", None),
    "magnet.gilbert_damping": ("dimensionless", 0.01),
    "magnet.temperature": ("temperature", 300.0),
    "sim.time_step": ("time", 1e-13),
    "sim.duration": ("time", 1e-6),
    "sim.decimation": ("int", 1000),
    "sim.stress": ("stress", 0.0),
    "sim.temperature": ("temperature", 300.0),
    "sim.integrator": ("str", "euler"),
    "sim.seed": ("int", 0),
    "sim.runs": ("int", 1),
    "landscape.stresses": ("list:stress", [0.0, 2e6, 4e6, 6e6]),
    "landscape.theta_points": ("int", 361),
    "analysis.bins": ("int", 64),
    "analysis.input": ("str", "trajectory.csv"),
    "piezo.d33": ("piezo_coeff", 2.5e-9),
    "piezo.relative_permittivity": ("dimensionless", 4000.0),
    "piezo.layer_thickness": ("length", 300e-9),
    "piezo.pad_area": ("area", 1e-14),
    "piezo.pad_count": ("int", 2),
    "reconfig.stress": ("stress", 6.5e6),
    "retention.attempt_time": ("time", 1e-9),
    "retention.targets": ("list:time", [1e-6, 1.0, 10 * SECONDS_PER_YEAR]),
    "retention.allow_barrier_raising": ("int", 1),
    "anneal.problem_file": ("str", ""),
    "anneal.n_sweeps": ("int", 1000),
    "anneal.beta_start": ("dimensionless", 0.0),
    "anneal.beta_end": ("dimensionless", 3.0),
    "anneal.restarts": ("int", 1),
    "anneal.seed": ("int", 0),
    "output.directory": ("str", "out"),
}

_REQUIRED_MAGNET_KEYS = [k for k, (_, d) in SCHEMA.items() if d is None]


@dataclass(frozen=True)
class RunConfig:
    """Fully validated configuration, values in SI base units."""

    values: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def magnet_spec(self) -> MagnetSpec:
        missing = [k for k in _REQUIRED_MAGNET_KEYS if self.values.get(k) is None]
        if missing:
            raise ConfigError(f"missing required magnet keys: {', '.join(missing)}")
        v = self.values
        return MagnetSpec(
            major_axis=v["magnet.major_axis"],
            minor_axis=v["magnet.minor_axis"],
            thickness=v["magnet.thickness"],
            saturation_magnetization=v["magnet.saturation_magnetization"],
            magnetostriction=v["magnet.magnetostriction"],
            youngs_modulus=v["magnet.youngs_modulus"],
            gilbert_damping=v["magnet.gilbert_damping"],
            temperature=v["magnet.temperature"],
        )

    def sim_config(self) -> SimulationConfig:
        v = self.values
        return SimulationConfig(
            time_step=v["sim.time_step"],
            duration=v["sim.duration"],
            seed=v["sim.seed"],
            decimation=v["sim.decimation"],
            stress=v["sim.stress"],
            temperature=v["sim.temperature"],
            integrator=v["sim.integrator"],
        )

    def piezo_stack(self) -> PiezoStack:
        v = self.values
        return PiezoStack(
            d33=v["piezo.d33"],
            relative_permittivity=v["piezo.relative_permittivity"],
            layer_thickness=v["piezo.layer_thickness"],
            pad_area=v["piezo.pad_area"],
            pad_count=v["piezo.pad_count"],
        )


def _parse_quantity(raw: str, dimension: str, where: str) -> float:
    tokens = raw.split()
    units = UNIT_FACTORS[dimension]
    if len(tokens) == 1:
        # bare number: legal only if the dimension admits a bare unit
        if "" not in units:
            raise ConfigError(f"{where}: missing unit (expected one of "
                              f"{sorted(u for u in units if u)})")
        unit, number = "", tokens[0]
    elif len(tokens) == 2:
        number, unit = tokens
        if unit not in units:
            raise ConfigError(f"{where}: unknown unit '{unit}' (expected one of "
                              f"{sorted(u for u in units if u)})")
    else:
        raise ConfigError(f"{where}: expected 'number [unit]'")
    try:
        value = float(number)
    except ValueError:
        raise ConfigError(f"{where}: not a number: '{number}'") from None
    return value * units[unit]


def _parse_value(raw: str, kind: str, where: str) -> Any:
    if kind == "str":
        return raw.strip()
    if kind == "int":
        try:
            return int(raw.strip())
        except ValueError:
            raise ConfigError(f"{where}: expected an integer") from None
    if kind.startswith("list:"):
        dim = kind.split(":", 1)[1]
        items = [s.strip() for s in raw.split(",") if s.strip()]
        if not items:
            raise ConfigError(f"{where}: empty list")
        return [_parse_quantity(item, dim, where) for item in items]
    return _parse_quantity(raw.strip(), kind, where)


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; fills all defaults."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, rhs = line.partition("=")
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        kind, _ = SCHEMA[key]
        values[key] = _parse_value(rhs, kind, f"line {lineno}: {key}")
    for key, (kind, default) in SCHEMA.items():
        values.setdefault(key, default)
    _validate(values)
    return RunConfig(values=values)


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply `key=value` override strings on top of a parsed config."""
    values = dict(cfg.values)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}': expected key=value")
        key, _, rhs = item.partition("=")
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigError(f"override: unknown key '{key}'")
        kind, _ = SCHEMA[key]
        values[key] = _parse_value(rhs, kind, f"override {key}")
    _validate(values)
    return RunConfig(values=values)


def _validate(values: dict[str, Any]) -> None:
    pos = [
        "sim.time_step", "sim.duration", "piezo.d33", "piezo.relative_permittivity",
        "piezo.layer_thickness", "piezo.pad_area", "retention.attempt_time",
    ]
    for key in pos:
        if values[key] is not None and values[key] <= 0:
            raise ConfigError(f"{key}: must be positive")
    for key in ["sim.decimation", "sim.runs", "anneal.n_sweeps", "anneal.restarts",
                "landscape.theta_points", "piezo.pad_count"]:
        if values[key] < 1:
            raise ConfigError(f"{key}: must be >= 1")
    if values["analysis.bins"] < 2:
        raise ConfigError("analysis.bins: must be >= 2")
    if values["sim.integrator"] not in ("euler", "heun"):
        raise ConfigError("sim.integrator: must be 'euler' or 'heun'")
    for key in ["magnet.temperature", "sim.temperature"]:
        if values[key] is not None and values[key] < 0:
            raise ConfigError(f"{key}: must be non-negative")
    for key in ["anneal.beta_start", "anneal.beta_end"]:
        if values[key] < 0:
            raise ConfigError(f"{key}: must be non-negative")


def emit_config(cfg: RunConfig) -> str:
    """Canonical text form; emit(parse(text)) reparses to an equal config."""
    lines = []
    for key, (kind, _) in SCHEMA.items():
        value = cfg.values.get(key)
        if value is None:
            continue
        if kind == "str":
            lines.append(f"{key} = {value}")
        elif kind == "int":
            lines.append(f"{key} = {value}")
        elif kind.startswith("list:"):
            dim = kind.split(":", 1)[1]
            unit = BASE_UNITS[dim]
            items = ", ".join(f"{v!r} {unit}".strip() for v in value)
            lines.append(f"{key} = {items}")
        else:
            unit = BASE_UNITS[kind]
            lines.append(f"{key} = {value!r} {unit}".rstrip())
    return "\n".join(lines) + "\n"
