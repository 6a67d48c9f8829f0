"""Experiment configuration: per-suite defaults, a flat key = value file, then flag overrides."""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    suite: str = ""
    q_min: int = 3
    q_max: int = 200
    moduli: list[int] = field(default_factory=list)  # explicit list overrides the range
    n_moduli: int = 0  # 0 = every modulus in range
    chars_per_q: int = 0  # 0 = every matching character
    d_min: int = 1
    d_max: int = 0  # 0 = no upper limit
    primes_only: bool = False
    two_power: bool = False
    squarefree: bool = False
    primitive_only: bool = False
    x: int = 0  # absolute cutoff (0 = suite default)
    delta: float = 0.0  # x = floor(q^delta) when > 0
    x_list: list[int] = field(default_factory=list)
    epsilon: float = 0.5
    tau: float = 0.1
    c: float = 1.0  # calibration for delta formulas
    c2: float = 1.0
    K: list[int] = field(default_factory=lambda: [1, 5, 20, 50])
    k_max: int = 3
    z: float = 30.0
    T: float = 10.0
    V: int = 10_000
    V_point: int = 0  # > 0 adds the t = 0 and t = 1/2 checks at this truncation
    point_tol: float = 1e-12
    grid_tol: float = 1e-4
    grid_points: int = 10_000
    M: int = 1000
    samples: int = 100
    conductor_bound: int = 40
    slack: float = 0.1
    seed: int = 12345
    tolerance: float = 0.05  # snapshot ratio drift
    json_out: str = ""
    csv_out: str = ""

    # fields that do not affect results
    _RUNTIME = ("json_out", "csv_out")

    def validate(self) -> ExperimentConfig:
        if not self.moduli and self.q_min > self.q_max:
            raise ConfigError(f"empty modulus range [{self.q_min}, {self.q_max}]")
        if self.q_min < 3 or any(q < 3 for q in self.moduli):
            raise ConfigError("moduli must be >= 3")
        if not 0 <= self.delta <= 1:
            raise ConfigError("delta must lie in (0, 1]")
        if self.d_max and self.d_max < self.d_min:
            raise ConfigError("empty order range")
        if not 0 < self.epsilon:
            raise ConfigError("epsilon must be positive")
        if not 0 < self.tau < 0.5:
            raise ConfigError("tau must lie in (0, 1/2)")
        if any(k < 1 for k in self.K):
            raise ConfigError("K values must be >= 1")
        if self.V < 1 or self.M < 1:
            raise ConfigError("V and M must be >= 1")
        return self

    def canonical(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if k not in self._RUNTIME}

    def hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def replace(self, **kw) -> ExperimentConfig:
        return dataclasses.replace(self, **kw)


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _parse_value(name: str, raw: str):
    kind = FIELD_TYPES[name]
    raw = raw.strip()
    try:
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        if kind == "float":
            return float(raw)
        if kind == "list[int]":
            return [int(v) for v in raw.replace(",", " ").split()] if raw else []
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc


def coerce(name: str, value):
    """Convert a flag or file value to the field's type."""
    name = name.replace("-", "_")
    if name not in FIELD_TYPES:
        raise ConfigError(f"unknown config key {name!r}")
    if isinstance(value, str):
        return _parse_value(name, value)
    return value


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` lines; '#' comments; no sections needed."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys such as K and V are case-sensitive
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[charsum]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return {k.replace("-", "_"): coerce(k, v) for k, v in parser["charsum"].items()}


def build_config(suite: str, defaults: dict, file_path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    values = dict(defaults)
    if file_path:
        values.update(read_config_file(file_path))
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k.replace("-", "_")] = coerce(k, v)
    values["suite"] = suite
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()

