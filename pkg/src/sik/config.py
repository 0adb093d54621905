"""Strict JSON ingestion and emission of geodesic systems and run settings."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import SCHEMA
from .audit import GeodesicSystem, validate_system
from .normal_form import decomposition_from_json, decomposition_to_json
from .pinching import PinchingRegime

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_fraction",
    "load_json",
    "system_from_json",
    "system_to_json",
    "parse_config",
    "emit_config",
]

_SYSTEM_KEYS = {"schema", "n", "geodesics", "regime", "axiom_j0"}
_REQUIRED = {"n", "geodesics"}


class ConfigError(ValueError):
    """Input rejected; the message names the file position or field."""


@dataclass(frozen=True)
class RunConfig:
    """Settings of one CLI run, checked on construction."""

    subcommand: str
    input: Path | None = None
    regime: str | None = None
    bar_m: int = 3
    M0: int = 1
    epsilon: Fraction = Fraction(1, 100)
    N_limit: int = 100_000
    output: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon < Fraction(1, 2):
            raise ConfigError(f"epsilon={self.epsilon} must lie in (0, 1/2)")
        if self.bar_m < 1:
            raise ConfigError(f"bar_m={self.bar_m} must be >= 1")
        if self.subcommand == "audit" and self.bar_m < 3:
            raise ConfigError(f"audit needs bar_m >= 3, got {self.bar_m}")
        if self.M0 < 1 or self.N_limit < 0:
            raise ConfigError("M0 must be >= 1 and N_limit >= 0")
        if self.output not in ("json", "tsv", "text"):
            raise ConfigError(f"unknown output format {self.output!r}")
        if self.input is not None and not Path(self.input).exists():
            raise ConfigError(f"{self.input}: no such file")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def load_json(path: str | os.PathLike):
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def system_from_json(obj, where: str = "system") -> GeodesicSystem:
    """Decode without validating; unknown or missing fields are errors."""
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(obj) - _SYSTEM_KEYS)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {unknown}")
    missing = sorted(_REQUIRED - set(obj))
    if missing:
        raise ConfigError(f"{where}: missing field(s) {missing}")
    if "schema" in obj and obj["schema"] != SCHEMA:
        raise ConfigError(f"{where}.schema: expected {SCHEMA!r}, got {obj['schema']!r}")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(f"{where}.n: must be an integer")
    geos = obj["geodesics"]
    if not isinstance(geos, list):
        raise ConfigError(f"{where}.geodesics: must be a list")
    try:
        decs = tuple(decomposition_from_json(g, f"{where}.geodesics[{k}]") for k, g in enumerate(geos))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    regime = None
    if obj.get("regime") is not None:
        try:
            regime = PinchingRegime(obj["regime"], n)
        except ValueError as exc:
            raise ConfigError(f"{where}.regime: {exc}") from exc
    j0 = obj.get("axiom_j0")
    if j0 is not None:
        names = [d.name for d in decs]
        if isinstance(j0, str):
            if j0 not in names:
                raise ConfigError(f"{where}.axiom_j0: no geodesic named {j0!r}")
            j0 = names.index(j0)
        elif not isinstance(j0, int) or isinstance(j0, bool):
            raise ConfigError(f"{where}.axiom_j0: must be a geodesic name or index")
    return GeodesicSystem(n, decs, regime, j0)


def system_to_json(system: GeodesicSystem) -> dict:
    out = {"schema": SCHEMA, "n": system.n,
           "geodesics": [decomposition_to_json(d) for d in system.geodesics]}
    if system.regime is not None:
        out["regime"] = system.regime.kind
    if system.axiom_j0 is not None:
        out["axiom_j0"] = system.geodesics[system.axiom_j0].name
    return out


def parse_config(path: str | os.PathLike, regime: str | None = None) -> GeodesicSystem:
    """Load and fully validate a system file; ``regime`` overrides the file's choice."""
    system = system_from_json(load_json(path), str(path))
    if regime is not None:
        try:
            system = GeodesicSystem(system.n, system.geodesics, PinchingRegime(regime, system.n),
                                    system.axiom_j0)
        except ValueError as exc:
            raise ConfigError(f"--regime: {exc}") from exc
    errs = [v for v in validate_system(system) if v.severity == "error"]
    if errs:
        raise ConfigError(f"{path}: " + "; ".join(str(v) for v in errs))
    return system


def emit_config(system: GeodesicSystem, path: str | os.PathLike | None = None) -> str:
    text = json.dumps(system_to_json(system), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

