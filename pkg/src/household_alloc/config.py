"""Flat ``key = value`` model configuration files.

Example::

    # all weights equal
    gamma1 = 1
    ...
    gamma7 = 1
    w = 1
    tau = 0.1
    w_next = 1      # optional, default 1
    R_next = 1      # optional, default 1
    Rp_next = 1     # optional, default 1
    tol_budget = 1e-10   # optional
    tol_fd_step = 1e-6   # optional
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .model import DEFAULT_TOL, EconomyParams, PreferenceWeights, Tolerances

REQUIRED_KEYS = tuple(f"gamma{i}" for i in range(1, 8)) + ("w", "tau")
OPTIONAL_KEYS = {"w_next": 1.0, "R_next": 1.0, "Rp_next": 1.0}
TOLERANCE_KEYS = {"tol_budget": "budget", "tol_fd_step": "fd_step"}
KNOWN_KEYS = set(REQUIRED_KEYS) | set(OPTIONAL_KEYS) | set(TOLERANCE_KEYS)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    prefs: PreferenceWeights
    econ: EconomyParams
    tol: Tolerances = DEFAULT_TOL
    source: str = "<config>"


def parse_config(text, source="<config>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        try:
            number = float(value)
        except ValueError:
            raise ConfigError(f"{where}: value of {key!r} is not a number: {value!r}") from None
        if not math.isfinite(number):
            raise ConfigError(f"{where}: value of {key!r} must be finite, got {value!r}")
        values[key] = number

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing required key(s): {', '.join(missing)}")

    prefs = PreferenceWeights(*(values[f"gamma{i}"] for i in range(1, 8)))
    econ = EconomyParams(
        w=values["w"],
        tau=values["tau"],
        **{k: values.get(k, default) for k, default in OPTIONAL_KEYS.items()},
    )
    tol = replace(DEFAULT_TOL, **{field: values[k] for k, field in TOLERANCE_KEYS.items() if k in values})
    return ModelConfig(prefs, econ, tol, source)


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return parse_config(text, str(path))


def format_config(prefs, econ):
    lines = [f"gamma{i} = {prefs.get(i)!r}" for i in range(1, 8)]
    lines += [f"w = {econ.w!r}", f"tau = {econ.tau!r}", f"w_next = {econ.w_next!r}",
              f"R_next = {econ.R_next!r}", f"Rp_next = {econ.Rp_next!r}"]
    return "\n".join(lines) + "\n"
