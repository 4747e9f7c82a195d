"""Run configuration: flat ``key = value`` files plus ``--key value`` overrides."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bath import BathSpec, temperature_from_log_ratio
from .errors import ClausiusError
from .interferometer import InterferometerConfig

ROOM_TEMPERATURE_LOG_RATIO = 9.52


class ConfigError(ClausiusError, ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


@dataclass(frozen=True)
class RunConfig:
    omega: float = 1e12
    temperature: float | None = None
    log10_omega_over_t: float | None = None
    gamma0: float = 1.5e-3
    cutoff_ratio: float = 10.0
    c2_sq: float | None = None  # None: 0.5, or the figure's own default
    phi: float = 0.0
    delta: float = 6.0
    # time grid; None means "figure default"
    t_min: float | None = None
    t_max: float | None = None
    t_n: int | None = None
    t_spacing: str = "log"
    # sweep axes
    log10_ratios: tuple = ()
    p_points: int = 401
    p_range: float = 6.0
    grid_n: int = 60
    temp_min: float = 0.0
    temp_max: float = 300.0
    temp_n: int = 301
    dim: int = 6
    out: str | None = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.temperature is not None and self.log10_omega_over_t is not None:
            raise ConfigError("temperature", "set either temperature or log10_omega_over_t, not both")
        checks = [
            ("omega", self.omega > 0, "must be positive"),
            ("gamma0", self.gamma0 > 0, "must be positive"),
            ("cutoff_ratio", self.cutoff_ratio > 0, "must be positive"),
            ("c2_sq", self.c2_sq is None or 0 <= self.c2_sq <= 1, "must lie in [0, 1]"),
            ("delta", self.delta >= 0, "must be non-negative"),
            ("t_spacing", self.t_spacing in ("log", "linear"), "must be 'log' or 'linear'"),
            ("p_points", self.p_points >= 2, "must be at least 2"),
            ("grid_n", self.grid_n >= 2, "must be at least 2"),
            ("temp_n", self.temp_n >= 2, "must be at least 2"),
            ("temp_min", 0 <= self.temp_min < self.temp_max, "needs 0 <= temp_min < temp_max"),
            ("dim", self.dim >= 2, "must be at least 2"),
            ("threads", self.threads >= 1, "must be at least 1"),
        ]
        if self.temperature is not None:
            checks.append(("temperature", self.temperature > 0, "must be positive"))
        if self.t_n is not None:
            checks.append(("t_n", self.t_n >= 2, "must be at least 2"))
        for key, ok, msg in checks:
            if not ok:
                raise ConfigError(key, msg)

    @property
    def resolved_temperature(self):
        if self.temperature is not None:
            return self.temperature
        ratio = ROOM_TEMPERATURE_LOG_RATIO if self.log10_omega_over_t is None else self.log10_omega_over_t
        return temperature_from_log_ratio(self.omega, ratio)

    def bath(self, temperature=None):
        t = self.resolved_temperature if temperature is None else temperature
        return BathSpec.from_ratio(self.gamma0, self.cutoff_ratio, self.omega, t)

    def bath_at_log_ratio(self, log10_ratio):
        return self.bath(temperature_from_log_ratio(self.omega, log10_ratio))

    def resolved_c2_sq(self, default=0.5):
        return default if self.c2_sq is None else self.c2_sq

    def interferometer(self, c2_sq=None, default=0.5):
        c2 = self.resolved_c2_sq(default) if c2_sq is None else c2_sq
        return InterferometerConfig.from_c2_sq(c2, self.phi, self.delta)

    def time_grid(self, t_min, t_max, n):
        lo = self.t_min if self.t_min is not None else t_min
        hi = self.t_max if self.t_max is not None else t_max
        n = self.t_n if self.t_n is not None else n
        if not hi > lo:
            raise ConfigError("t_max", "must exceed t_min")
        if self.t_spacing == "log":
            if not lo > 0:
                raise ConfigError("t_min", "must be positive for log spacing")
            return np.geomspace(lo, hi, n)
        return np.linspace(lo, hi, n)

    def require_open_c2(self, default=0.5):
        if not 0 < self.resolved_c2_sq(default) < 1:
            raise ConfigError("c2_sq", "must lie strictly between 0 and 1 for thermodynamic figures")


FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_INT_KEYS = {"t_n", "p_points", "grid_n", "temp_n", "dim", "seed", "threads"}
_STR_KEYS = {"t_spacing", "out"}


def parse_value(key, text):
    if key not in FIELDS:
        raise ConfigError(key, "unknown key")
    text = text.strip()
    try:
        if key == "log10_ratios":
            return _floats(text)
        if key in _STR_KEYS:
            return text
        if key in _INT_KEYS:
            return int(text)
        value = float(text)
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


def read_config_file(path):
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in values:
            raise ConfigError(key, "duplicate key")
        values[key] = parse_value(key, value)
    return values


def load_config(path=None, overrides=None):
    """Build a RunConfig from an optional file, then apply ``overrides`` (str or parsed values)."""
    values = read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        values[key] = parse_value(key, value) if isinstance(value, str) else value
    unknown = set(values) - set(FIELDS)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(key, "unknown key")
    try:
        return RunConfig(**values)
    except TypeError as exc:  # pragma: no cover - guarded by the key check above
        raise ConfigError("config", str(exc)) from exc


def default_config():
    return RunConfig()

