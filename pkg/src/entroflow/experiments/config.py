"""Flat key-value experiment configs.

One experiment per file.  Syntax: ``key = value`` lines, ``#`` comment lines
and blank lines; keys use at most one dotted level (``sweep.points``).  Every
key not in the experiment's registry is rejected, and every registered key
has a typed parser and a default, so a config mentioning only ``experiment``
runs the standard setup.

List-valued keys: comma-separated floats (``model.theta``), and
semicolon-separated comma triples for point sets (``model.points``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from ..models.pairwise import frustrated_theta

EXPERIMENTS = (
    "n3-decomposition",
    "n3-sweep",
    "n3-trajectories",
    "cw-magnetization",
    "cw-scaling",
    "oscillator-jacobi",
    "verify",
)


class ConfigError(ValueError):
    """Config file cannot be parsed or fails validation."""


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise ConfigError(f"expected a number, got {text!r}") from exc
    if not math.isfinite(v):
        raise ConfigError(f"numeric values must be finite, got {text!r}")
    return v


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"expected an integer, got {text!r}") from exc


def _parse_floats(text: str) -> tuple[float, ...]:
    parts = [p for p in (s.strip() for s in text.split(",")) if p]
    if not parts:
        raise ConfigError("expected a comma-separated list of numbers")
    return tuple(_parse_float(p) for p in parts)


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(_parse_int(s.strip()) for s in text.split(",") if s.strip())


def _parse_triples(text: str) -> tuple[tuple[float, float, float], ...]:
    triples = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        vals = _parse_floats(chunk)
        if len(vals) != 3:
            raise ConfigError(f"expected 3 numbers per point, got {chunk!r}")
        triples.append(vals)
    if not triples:
        raise ConfigError("expected at least one point")
    return tuple(triples)


def _parse_str(text: str) -> str:
    return text.strip()


_PARSERS = {
    "bool": _parse_bool,
    "float": _parse_float,
    "int": _parse_int,
    "floats": _parse_floats,
    "ints": _parse_ints,
    "triples": _parse_triples,
    "str": _parse_str,
}

_FRUSTRATED = tuple(frustrated_theta())

_COMMON_KEYS: dict[str, tuple[str, object]] = {
    "threads": ("int", 1),
    "output.format": ("str", "csv"),
    "output.plot": ("bool", True),
}

# key -> (type name, default), per experiment
_KEY_REGISTRY: dict[str, dict[str, tuple[str, object]]] = {
    "n3-decomposition": {
        "model.theta": ("floats", _FRUSTRATED),
        "model.beta": ("float", 1.0),
    },
    "n3-sweep": {
        "model.convention": ("str", "binary01"),
        "model.theta": ("floats", _FRUSTRATED),
        "sweep.beta_min": ("float", 10.0 ** -1.5),
        "sweep.beta_max": ("float", 10.0 ** 1.5),
        "sweep.points": ("int", 61),
    },
    "n3-trajectories": {
        "model.convention": ("str", "binary01"),
        "model.theta": ("floats", _FRUSTRATED),
        "integrator.dt": ("float", 1e-2),
        "integrator.max_steps": ("int", 100_000),
        "integrator.record_every": ("int", 10),
    },
    "cw-magnetization": {
        "model.n": ("int", 400),
        "model.coupling": ("float", 1.0),
        "model.field": ("float", 0.01),
        "sweep.beta_min": ("float", 0.1),
        "sweep.beta_max": ("float", 3.0),
        "sweep.points": ("int", 61),
    },
    "cw-scaling": {
        "model.coupling": ("float", 1.0),
        "model.field": ("float", 0.01),
        "sweep.n_values": ("ints", (25, 50, 100, 200, 400, 800, 1600)),
        "sweep.beta_factors": ("floats", (0.5, 2.0, 4.0)),
    },
    "oscillator-jacobi": {
        "model.points": ("triples", ((1.0, 1.0, 0.0), (1.0, 0.95, 0.2), (1.0, 0.5, 0.2))),
    },
    "verify": {},
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    values: dict[str, object]
    source: str = "<memory>"

    def __getitem__(self, key: str):
        return self.values[key]

    def resolved(self) -> dict[str, object]:
        out = {"experiment": self.experiment}
        out.update(self.values)
        return out


def parse_config(text: str, source: str = "<memory>") -> ExperimentConfig:
    """Parse and validate config text into an ExperimentConfig."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key.count(".") > 1:
            raise ConfigError(f"{source}:{lineno}: key {key!r} nests deeper than one level")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        raw[key] = value.strip()

    if "experiment" not in raw:
        raise ConfigError(f"{source}: missing required key 'experiment'")
    experiment = raw.pop("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"{source}: unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")

    registry = dict(_COMMON_KEYS)
    registry.update(_KEY_REGISTRY[experiment])
    values: dict[str, object] = {k: default for k, (_, default) in registry.items()}
    for key, text_value in raw.items():
        if key not in registry:
            raise ConfigError(f"{source}: unknown key {key!r} for experiment {experiment!r}")
        type_name, _ = registry[key]
        try:
            values[key] = _PARSERS[type_name](text_value)
        except ConfigError as exc:
            raise ConfigError(f"{source}: key {key!r}: {exc}") from exc

    _validate(experiment, values, source)
    return ExperimentConfig(experiment=experiment, values=values, source=source)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(path))


def _validate(experiment: str, values: dict[str, object], source: str) -> None:
    if values["threads"] < 1:
        raise ConfigError(f"{source}: threads must be >= 1")
    if values["output.format"] not in ("csv", "json"):
        raise ConfigError(f"{source}: output.format must be 'csv' or 'json'")
    conv = values.get("model.convention")
    if conv is not None and conv not in ("ising", "binary01"):
        raise ConfigError(f"{source}: model.convention must be 'ising' or 'binary01'")
    theta = values.get("model.theta")
    if theta is not None and len(theta) != 6:
        raise ConfigError(f"{source}: model.theta needs 6 entries "
                          "(3 biases then couplings 12, 13, 23)")
    if experiment in ("n3-sweep", "cw-magnetization"):
        lo, hi, pts = (values["sweep.beta_min"], values["sweep.beta_max"],
                       values["sweep.points"])
        if not (0.0 < lo < hi):
            raise ConfigError(f"{source}: need 0 < sweep.beta_min < sweep.beta_max")
        if pts < 2:
            raise ConfigError(f"{source}: sweep.points must be >= 2")
    if experiment == "n3-decomposition" and values["model.beta"] <= 0.0:
        raise ConfigError(f"{source}: model.beta must be positive")
    if experiment == "n3-trajectories":
        if values["integrator.dt"] <= 0.0:
            raise ConfigError(f"{source}: integrator.dt must be positive")
        if values["integrator.max_steps"] < 1 or values["integrator.record_every"] < 1:
            raise ConfigError(f"{source}: integrator counts must be >= 1")
    if experiment == "cw-magnetization" and values["model.n"] < 1:
        raise ConfigError(f"{source}: model.n must be >= 1")
    if experiment == "cw-scaling":
        if any(n < 2 for n in values["sweep.n_values"]):
            raise ConfigError(f"{source}: sweep.n_values must all be >= 2")
        if any(b <= 0.0 for b in values["sweep.beta_factors"]):
            raise ConfigError(f"{source}: sweep.beta_factors must be positive")
    if experiment in ("cw-magnetization", "cw-scaling") and values["model.coupling"] <= 0.0:
        raise ConfigError(f"{source}: model.coupling must be positive")
