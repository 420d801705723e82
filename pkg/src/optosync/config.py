"""Plain-text run configuration.

A config file holds one ``key = value`` assignment per line; blank
lines and ``#`` comments are ignored.  Recognized keys are exactly the
twelve physical parameters plus the numerical controls ``dt``,
``t_end``, ``transient_fraction`` and ``record_stride``.  Unknown keys
are an error, missing keys fall back to the defaults below.  The same
``key=value`` syntax is accepted by the ``--set`` command-line flag,
which is applied after the file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OptosyncError
from .model import PARAM_ORDER, SystemParams, default_dt

#: config-file spelling of each physical parameter ("lambda" is a Python
#: keyword, so the dataclass field is "lam")
PARAM_KEYS = {name if name != "lam" else "lambda": name for name in PARAM_ORDER}

CONTROL_KEYS = ("dt", "t_end", "transient_fraction", "record_stride")

#: every key a config file may contain, in canonical order
CONFIG_KEYS = tuple(PARAM_KEYS) + CONTROL_KEYS


class ConfigError(OptosyncError):
    """Malformed configuration input."""

    def __init__(self, message, source=None, line=None):
        if source is not None and line is not None:
            message = f"{source}:{line}: {message}"
        elif source is not None:
            message = f"{source}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class RunConfig:
    """Resolved physical parameters plus numerical controls."""

    params: SystemParams
    dt: float
    t_end: float = 3000.0
    transient_fraction: float = 0.6
    record_stride: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be > 0, got {self.dt!r}")
        if not (math.isfinite(self.t_end) and self.t_end >= self.dt):
            raise ConfigError(f"t_end must be >= dt, got {self.t_end!r}")
        if not 0.0 <= self.transient_fraction < 1.0:
            raise ConfigError(
                f"transient_fraction must be in [0, 1), got {self.transient_fraction!r}")
        if self.record_stride < 1:
            raise ConfigError(f"record_stride must be >= 1, got {self.record_stride!r}")

    def as_dict(self) -> dict:
        """All config keys with their resolved values, in canonical order."""
        out = {}
        for key, field in PARAM_KEYS.items():
            out[key] = getattr(self.params, field)
        out["dt"] = self.dt
        out["t_end"] = self.t_end
        out["transient_fraction"] = self.transient_fraction
        out["record_stride"] = self.record_stride
        return out


def default_config() -> RunConfig:
    """Defaults: baseline parameters, 500 steps per modulation period."""
    params = SystemParams()
    return RunConfig(params=params, dt=default_dt(params))


def parse_assignments(lines, source="<config>") -> dict:
    """Parse ``key = value`` lines into a raw string mapping.

    ``lines`` is an iterable of text lines.  Duplicate keys keep the
    last assignment.  Values are validated later, keys immediately.
    """
    raw = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError("expected 'key = value'", source, lineno)
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", source, lineno)
        if not value:
            raise ConfigError(f"missing value for key {key!r}", source, lineno)
        raw[key] = (value, lineno)
    return raw


def parse_config_text(text: str, source="<config>") -> dict:
    return parse_assignments(text.splitlines(), source)


def parse_config_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_assignments(handle, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc


def parse_set_overrides(assignments) -> dict:
    """Parse repeated ``--set key=value`` flags into a raw mapping."""
    raw = {}
    for i, text in enumerate(assignments, start=1):
        entry = parse_assignments([text], source="--set")
        if not entry:
            raise ConfigError(f"--set argument {i} is empty")
        raw.update(entry)
    return raw


def _convert(key, value, lineno, source):
    try:
        number = float(value)
    except ValueError:
        raise ConfigError(f"value for {key!r} is not a number: {value!r}",
                          source, lineno) from None
    if key == "record_stride":
        if not number.is_integer():
            raise ConfigError(f"record_stride must be an integer, got {value!r}",
                              source, lineno)
        return int(number)
    return number


def build_config(raw: dict, source="<config>") -> RunConfig:
    """Turn raw assignments into a validated :class:`RunConfig`.

    Missing keys fall back to defaults; a missing ``dt`` resolves to 500
    integration steps per modulation period of the resolved parameters.
    """
    values = {}
    for key, (text, lineno) in raw.items():
        values[key] = _convert(key, text, lineno, source)

    param_kwargs = {field: values[key] for key, field in PARAM_KEYS.items()
                    if key in values}
    try:
        params = SystemParams(**param_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), source) from exc

    defaults = RunConfig(params=params, dt=values.get("dt", default_dt(params)))
    return RunConfig(
        params=params,
        dt=defaults.dt,
        t_end=values.get("t_end", defaults.t_end),
        transient_fraction=values.get("transient_fraction", defaults.transient_fraction),
        record_stride=values.get("record_stride", defaults.record_stride),
    )


def load_config(path=None, overrides=None) -> RunConfig:
    """Resolve a run configuration from an optional file plus overrides."""
    raw = parse_config_file(path) if path is not None else {}
    if overrides:
        raw.update(parse_set_overrides(overrides))
    return build_config(raw, source=str(path) if path is not None else "<defaults>")
