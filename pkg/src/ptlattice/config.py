"""Job configuration parsing, validation, and canonical serialization.

A job is described by a single YAML (or JSON) mapping.  Parsing resolves
every default explicitly, rejects unknown keys, and produces an immutable
:class:`JobConfig`.  ``parse_config(dump_config(cfg))`` round-trips exactly,
and the resolved mapping (minus runtime-only keys) is embedded verbatim in
every output artifact.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import yaml

from .core import BOUNDARIES, validate_impurity_site
from .errors import ConfigParseError, ConfigValidationError, SpecValidationError

COMMANDS = ("spectrum", "threshold", "phase-diagram", "ring-threshold", "verify")
PROFILES = ("constant", "parabolic-sqrt", "explicit")

#: Named gain-matrix directions accepted by the ``ray`` key, as (s, x, z).
RAY_ALIASES = {
    "identity": (1.0, 0.0, 0.0),
    "tau_x": (0.0, 1.0, 0.0),
    "tau_z": (0.0, 0.0, 1.0),
}

#: The only keys that may be overridden from the command line.
OVERRIDABLE_KEYS = ("N", "m", "t_d", "gamma")

# Mapping from document keys to JobConfig field names.
_KEY_TO_FIELD = {
    "command": "command",
    "out_dir": "out_dir",
    "workers": "workers",
    "N": "n_sites",
    "boundary": "boundary",
    "profile": "profile",
    "t_s": "t_s",
    "t_d": "t_d",
    "t0": "t0",
    "t_d_fraction": "t_d_fraction",
    "bonds": "bonds",
    "force_bonds": "force_bonds",
    "m": "impurity_site",
    "m_values": "m_values",
    "ray": "ray",
    "gamma": "gamma",
    "t_d_over_t_s": "t_d_over_t_s",
    "t0_s": "t0_s",
    "t0_d": "t0_d",
    "tb_s": "tb_s",
    "tb_d": "tb_d",
    "tolerance": "tolerance",
    "reality_tolerance": "reality_tolerance",
    "bracket_cap": "bracket_cap",
}
_FIELD_TO_KEY = {field: key for key, field in _KEY_TO_FIELD.items()}

_RUNTIME_KEYS = ("workers", "out_dir")

_PROFILE_KEYS = {
    "constant": ("t_s", "t_d"),
    "parabolic-sqrt": ("t0", "t_d_fraction"),
    "explicit": ("bonds", "force_bonds"),
}

_COMMON_KEYS = ("command", "out_dir", "workers")
_CHAIN_KEYS = (
    "N",
    "boundary",
    "profile",
    "t_s",
    "t_d",
    "t0",
    "t_d_fraction",
    "bonds",
    "force_bonds",
)
_COMMAND_KEYS = {
    "spectrum": _CHAIN_KEYS + ("m", "ray", "gamma", "reality_tolerance"),
    "threshold": _CHAIN_KEYS
    + ("m", "ray", "tolerance", "reality_tolerance", "bracket_cap"),
    "phase-diagram": _CHAIN_KEYS
    + (
        "ray",
        "m_values",
        "t_d_over_t_s",
        "tolerance",
        "reality_tolerance",
        "bracket_cap",
    ),
    "ring-threshold": (
        "N",
        "m_values",
        "t0_s",
        "t0_d",
        "tb_s",
        "tb_d",
        "tolerance",
        "reality_tolerance",
        "bracket_cap",
    ),
    "verify": _CHAIN_KEYS + ("m", "ray", "gamma", "tolerance"),
}

# Commands whose tolerance key means a bisection tolerance (relative to the
# lattice scale) versus a spectral-comparison tolerance.
_BISECTION_COMMANDS = ("threshold", "phase-diagram", "ring-threshold")

_DEFAULT_BISECTION_TOLERANCE = 1e-4
_DEFAULT_VERIFY_TOLERANCE = 1e-8
_DEFAULT_REALITY_TOLERANCE = 1e-8
_DEFAULT_BRACKET_CAP = 8.0


@dataclass(frozen=True)
class JobConfig:
    """A fully resolved, validated job description.

    Fields not used by ``command`` are ``None`` and omitted from dumps.
    Tolerances are dimensionless multiples of the lattice tunneling scale.
    """

    command: str
    n_sites: int
    out_dir: str = "out"
    workers: int = 1
    boundary: str | None = None
    profile: str | None = None
    t_s: float | None = None
    t_d: float | None = None
    t0: float | None = None
    t_d_fraction: float | None = None
    bonds: tuple[tuple[float, float, float], ...] | None = None
    force_bonds: bool | None = None
    impurity_site: int | None = None
    m_values: tuple[int, ...] | None = None
    ray: tuple[float, float, float] | None = None
    gamma: float | None = None
    t_d_over_t_s: tuple[float, ...] | None = None
    t0_s: float | None = None
    t0_d: float | None = None
    tb_s: float | None = None
    tb_d: float | None = None
    tolerance: float | None = None
    reality_tolerance: float | None = None
    bracket_cap: float | None = None


def _require_mapping(raw: object) -> dict:
    if not isinstance(raw, dict):
        raise ConfigParseError(
            f"config document must be a mapping, got {type(raw).__name__}"
        )
    for key in raw:
        if not isinstance(key, str):
            raise ConfigParseError(f"config keys must be strings, got {key!r}")
    return raw


def load_document(text: str) -> dict:
    """Parse a YAML/JSON config document into a raw mapping."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"malformed config document: {exc}") from exc
    if raw is None:
        raise ConfigParseError("config document is empty")
    return _require_mapping(raw)


def apply_overrides(raw: dict, overrides: list[str] | tuple[str, ...]) -> dict:
    """Apply ``key=value`` command-line overrides to a raw config mapping.

    Only the keys in :data:`OVERRIDABLE_KEYS` may be set this way.
    """
    updated = dict(raw)
    for item in overrides:
        key, sep, value_text = item.partition("=")
        if not sep or not key:
            raise ConfigValidationError(f"override {item!r} is not of form key=value")
        if key not in OVERRIDABLE_KEYS:
            allowed = ", ".join(OVERRIDABLE_KEYS)
            raise ConfigValidationError(
                f"override key {key!r} not allowed (allowed: {allowed})"
            )
        try:
            value = yaml.safe_load(value_text)
        except yaml.YAMLError as exc:
            raise ConfigValidationError(
                f"override {key}: unparseable value {value_text!r}"
            ) from exc
        updated[key] = value
    return updated


def _as_int(key: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigValidationError(f"{key}: expected an integer, got {value!r}")
    return value


def _as_float(key: str, value: object) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(f"{key}: expected a number, got {value!r}")
    value = float(value)
    if value != value or value in (float("inf"), float("-inf")):
        raise ConfigValidationError(f"{key}: value must be finite, got {value!r}")
    return value


def _as_bool(key: str, value: object) -> bool:
    if not isinstance(value, bool):
        raise ConfigValidationError(f"{key}: expected a boolean, got {value!r}")
    return value


def _as_str(key: str, value: object, choices: tuple[str, ...] | None = None) -> str:
    if not isinstance(value, str):
        raise ConfigValidationError(f"{key}: expected a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigValidationError(
            f"{key}: {value!r} is not one of {', '.join(choices)}"
        )
    return value


def _parse_ray(value: object) -> tuple[float, float, float]:
    if isinstance(value, str):
        if value not in RAY_ALIASES:
            names = ", ".join(sorted(RAY_ALIASES))
            raise ConfigValidationError(f"ray: unknown name {value!r} (known: {names})")
        return RAY_ALIASES[value]
    if isinstance(value, dict):
        unknown = set(value) - {"s", "x", "z"}
        if unknown:
            raise ConfigValidationError(
                f"ray: unknown component keys {sorted(unknown)} (use s, x, z)"
            )
        s = _as_float("ray.s", value.get("s", 0.0))
        x = _as_float("ray.x", value.get("x", 0.0))
        z = _as_float("ray.z", value.get("z", 0.0))
        magnitude = max(abs(s), abs(x), abs(z))
        if magnitude == 0.0:
            raise ConfigValidationError("ray: direction must be nonzero")
        return (s / magnitude, x / magnitude, z / magnitude)
    raise ConfigValidationError(f"ray: expected a name or mapping, got {value!r}")


def _parse_bonds(value: object) -> tuple[tuple[float, float, float], ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigValidationError("bonds: expected a non-empty list")
    out = []
    for index, entry in enumerate(value):
        label = f"bonds[{index}]"
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            out.append((float(entry), 0.0, 0.0))
        elif isinstance(entry, (list, tuple)) and 1 <= len(entry) <= 3:
            parts = [_as_float(label, component) for component in entry]
            parts += [0.0] * (3 - len(parts))
            out.append(tuple(parts))
        else:
            raise ConfigValidationError(
                f"{label}: expected a number or [s, x, z] list, got {entry!r}"
            )
    return tuple(out)


def _parse_int_list(key: str, value: object) -> tuple[int, ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigValidationError(f"{key}: expected a non-empty list")
    return tuple(_as_int(f"{key}[{i}]", entry) for i, entry in enumerate(value))


def _parse_float_list(key: str, value: object) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigValidationError(f"{key}: expected a non-empty list")
    return tuple(_as_float(f"{key}[{i}]", entry) for i, entry in enumerate(value))


def build_config(raw: dict) -> JobConfig:
    """Validate a raw config mapping and resolve every default."""
    raw = _require_mapping(raw)
    if "command" not in raw:
        raise ConfigValidationError("missing required key 'command'")
    command = _as_str("command", raw["command"], COMMANDS)

    allowed = set(_COMMON_KEYS) | set(_COMMAND_KEYS[command])
    unknown = set(raw) - allowed
    if unknown:
        names = ", ".join(sorted(unknown))
        raise ConfigValidationError(
            f"unknown key(s) for command {command!r}: {names}"
        )

    if "N" not in raw:
        raise ConfigValidationError("missing required key 'N'")
    n_sites = _as_int("N", raw["N"])
    if n_sites < 2:
        raise ConfigValidationError(f"N: must be at least 2, got {n_sites}")

    fields: dict[str, object] = {"command": command, "n_sites": n_sites}

    fields["out_dir"] = _as_str("out_dir", raw.get("out_dir", "out"))
    workers = _as_int("workers", raw.get("workers", 1))
    if workers < 1:
        raise ConfigValidationError(f"workers: must be at least 1, got {workers}")
    fields["workers"] = workers

    uses_chain = command != "ring-threshold"
    if uses_chain:
        fields["boundary"] = _as_str("boundary", raw.get("boundary", "open"), BOUNDARIES)
        profile = _as_str("profile", raw.get("profile", "constant"), PROFILES)
        fields["profile"] = profile
        for other_kind, keys in _PROFILE_KEYS.items():
            if other_kind == profile:
                continue
            clashes = [key for key in keys if key in raw]
            if clashes:
                raise ConfigValidationError(
                    f"key(s) {', '.join(clashes)} not valid for profile {profile!r}"
                )
        if profile == "constant":
            fields["t_s"] = _as_float("t_s", raw.get("t_s", 1.0))
            if fields["t_s"] < 0:
                raise ConfigValidationError(f"t_s: must be >= 0, got {fields['t_s']}")
            if "t_d" in raw and "t_d_over_t_s" in raw:
                raise ConfigValidationError(
                    "key 't_d' conflicts with 't_d_over_t_s'; give one or the other"
                )
            if "t_d_over_t_s" not in raw:
                fields["t_d"] = _as_float("t_d", raw.get("t_d", 0.0))
                if fields["t_d"] < 0:
                    raise ConfigValidationError(
                        f"t_d: must be >= 0, got {fields['t_d']}"
                    )
        elif profile == "parabolic-sqrt":
            fields["t0"] = _as_float("t0", raw.get("t0", 1.0))
            if fields["t0"] < 0:
                raise ConfigValidationError(f"t0: must be >= 0, got {fields['t0']}")
            fraction = _as_float("t_d_fraction", raw.get("t_d_fraction", 0.0))
            if not 0.0 <= fraction <= 1.0:
                raise ConfigValidationError(
                    f"t_d_fraction: must be within [0, 1], got {fraction}"
                )
            fields["t_d_fraction"] = fraction
        else:
            if "bonds" not in raw:
                raise ConfigValidationError(
                    "missing required key 'bonds' for explicit profile"
                )
            fields["bonds"] = _parse_bonds(raw["bonds"])
            fields["force_bonds"] = _as_bool("force_bonds", raw.get("force_bonds", False))

    needs_site = command in ("spectrum", "threshold", "verify")
    if needs_site:
        if "m" not in raw:
            raise ConfigValidationError("missing required key 'm'")
        site = _as_int("m", raw["m"])
        try:
            validate_impurity_site(n_sites, site)
        except SpecValidationError as exc:
            raise ConfigValidationError(f"m: {exc}") from exc
        fields["impurity_site"] = site

    if command in ("phase-diagram", "ring-threshold"):
        m_values = raw.get("m_values")
        if m_values is None:
            resolved = tuple(range(1, n_sites // 2 + 1))
        else:
            resolved = _parse_int_list("m_values", m_values)
            if tuple(sorted(set(resolved))) != resolved:
                raise ConfigValidationError(
                    "m_values: entries must be strictly increasing"
                )
            for site in resolved:
                try:
                    validate_impurity_site(n_sites, site)
                except SpecValidationError as exc:
                    raise ConfigValidationError(f"m_values: {exc}") from exc
        if not resolved:
            raise ConfigValidationError("m_values: no admissible impurity sites")
        fields["m_values"] = resolved

    if "ray" in _COMMAND_KEYS[command]:
        if "ray" not in raw:
            raise ConfigValidationError("missing required key 'ray'")
        fields["ray"] = _parse_ray(raw["ray"])

    if command in ("spectrum", "verify"):
        if "gamma" not in raw:
            raise ConfigValidationError("missing required key 'gamma'")
        gamma = _as_float("gamma", raw["gamma"])
        if gamma < 0:
            raise ConfigValidationError(f"gamma: must be >= 0, got {gamma}")
        fields["gamma"] = gamma

    if command == "phase-diagram" and "t_d_over_t_s" in raw:
        ratios = _parse_float_list("t_d_over_t_s", raw["t_d_over_t_s"])
        if len(set(ratios)) != len(ratios):
            raise ConfigValidationError("t_d_over_t_s: entries must be distinct")
        for ratio in ratios:
            if ratio < 0:
                raise ConfigValidationError(
                    f"t_d_over_t_s: ratios must be >= 0, got {ratio}"
                )
        fields["t_d_over_t_s"] = ratios

    if command == "ring-threshold":
        for key, default in (("t0_s", None), ("tb_s", None), ("t0_d", 0.0), ("tb_d", 0.0)):
            if key not in raw:
                if default is None:
                    raise ConfigValidationError(f"missing required key {key!r}")
                value = default
            else:
                value = _as_float(key, raw[key])
            if value < 0:
                raise ConfigValidationError(f"{key}: must be >= 0, got {value}")
            fields[key] = value

    if "tolerance" in _COMMAND_KEYS[command]:
        default = (
            _DEFAULT_BISECTION_TOLERANCE
            if command in _BISECTION_COMMANDS
            else _DEFAULT_VERIFY_TOLERANCE
        )
        tolerance = _as_float("tolerance", raw.get("tolerance", default))
        if tolerance <= 0:
            raise ConfigValidationError(f"tolerance: must be > 0, got {tolerance}")
        fields["tolerance"] = tolerance

    if "reality_tolerance" in _COMMAND_KEYS[command]:
        reality = _as_float(
            "reality_tolerance", raw.get("reality_tolerance", _DEFAULT_REALITY_TOLERANCE)
        )
        if reality <= 0:
            raise ConfigValidationError(
                f"reality_tolerance: must be > 0, got {reality}"
            )
        fields["reality_tolerance"] = reality

    if "bracket_cap" in _COMMAND_KEYS[command]:
        cap = _as_float("bracket_cap", raw.get("bracket_cap", _DEFAULT_BRACKET_CAP))
        if cap <= 0:
            raise ConfigValidationError(f"bracket_cap: must be > 0, got {cap}")
        fields["bracket_cap"] = cap

    return JobConfig(**fields)


def parse_config(text: str) -> JobConfig:
    """Parse and validate a config document."""
    return build_config(load_document(text))


def _ray_value(ray: tuple[float, float, float]) -> object:
    for name, direction in RAY_ALIASES.items():
        if ray == direction:
            return name
    return {"s": ray[0], "x": ray[1], "z": ray[2]}


def config_to_dict(config: JobConfig, include_runtime: bool = True) -> dict:
    """Render a resolved config back to its canonical mapping."""
    out: dict[str, object] = {}
    for field in dataclasses.fields(JobConfig):
        value = getattr(config, field.name)
        if value is None:
            continue
        key = _FIELD_TO_KEY[field.name]
        if not include_runtime and key in _RUNTIME_KEYS:
            continue
        if key == "ray":
            out[key] = _ray_value(value)
        elif key == "bonds":
            out[key] = [list(bond) for bond in value]
        elif isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def dump_config(config: JobConfig) -> str:
    """Serialize a config so that ``parse_config`` round-trips it exactly."""
    return yaml.safe_dump(config_to_dict(config), sort_keys=True, default_flow_style=False)
