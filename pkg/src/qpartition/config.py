"""Run configuration: a single JSON document per run.

Example::

    {
      "system": {"model": "oscillator", "mass": 1.0, "omega0": 1.0,
                 "kernel": {"model": "drude", "gamma0": 1.0, "omega_c": 10.0}},
      "thermal": {"temperatures": [0.1, 1.0, 10.0], "hbar": 1.0, "kB": 1.0},
      "grid": {"omega_max": 50.0, "n_points": 1001, "spacing": "linear"},
      "quad": {"tolerance": 1e-10, "rtol": 1e-10, "tail_fraction": 1e-8},
      "bath": {"N": [4000], "omega_max": 400.0, "epsilon": 0.001,
               "placement": "midpoint", "rel_tol": 0.005},
      "output": {"path": "-", "format": "csv"}
    }
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .kernels import MemoryKernel
from .partition import GridSpec, QuadSpec
from .response import SystemModel

FORMATS = ("csv", "json")
_SECTIONS = {"system", "thermal", "grid", "quad", "bath", "output"}


def _only(d, allowed, what):
    if not isinstance(d, Mapping):
        raise ConfigError(f"{what} must be an object")
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {what} fields: {sorted(unknown)}")


@dataclass(frozen=True)
class ThermalSpec:
    temperatures: tuple[float, ...]
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        if not self.temperatures:
            raise ConfigError("thermal.temperatures must not be empty")
        if any(t < 0 for t in self.temperatures):
            raise ConfigError("temperatures must be >= 0")
        if self.hbar <= 0 or self.kB <= 0:
            raise ConfigError("hbar and kB must be positive")

    def to_dict(self):
        return {"temperatures": list(self.temperatures), "hbar": self.hbar, "kB": self.kB}

    @classmethod
    def from_dict(cls, d):
        _only(d, {"temperatures", "hbar", "kB"}, "thermal")
        temps = d.get("temperatures")
        if not isinstance(temps, list):
            raise ConfigError("thermal.temperatures must be a list")
        try:
            return cls(tuple(float(t) for t in temps), float(d.get("hbar", 1.0)),
                       float(d.get("kB", 1.0)))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad thermal spec: {exc}") from None


@dataclass(frozen=True)
class BathSpec:
    N: tuple[int, ...] = (4000,)
    omega_max: float = 400.0
    epsilon: float = 1e-3
    placement: str = "midpoint"
    rel_tol: float = 5e-3

    def __post_init__(self):
        if not self.N or any(int(n) != n or n < 1 for n in self.N):
            raise ConfigError("bath.N must be a non-empty list of positive integers")
        if self.omega_max <= 0 or self.epsilon <= 0 or self.rel_tol <= 0:
            raise ConfigError("bath.omega_max, epsilon and rel_tol must be positive")
        if self.placement not in ("midpoint", "right"):
            raise ConfigError("bath.placement must be 'midpoint' or 'right'")

    def to_dict(self):
        return {"N": list(self.N), "omega_max": self.omega_max, "epsilon": self.epsilon,
                "placement": self.placement, "rel_tol": self.rel_tol}

    @classmethod
    def from_dict(cls, d):
        _only(d, {"N", "omega_max", "epsilon", "placement", "rel_tol"}, "bath")
        N = d.get("N", [4000])
        if isinstance(N, int):
            N = [N]
        try:
            return cls(tuple(int(n) for n in N), float(d.get("omega_max", 400.0)),
                       float(d.get("epsilon", 1e-3)), d.get("placement", "midpoint"),
                       float(d.get("rel_tol", 5e-3)))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad bath spec: {exc}") from None


@dataclass(frozen=True)
class OutputSpec:
    path: str = "-"
    format: str = "csv"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}, got {self.format!r}")

    def to_dict(self):
        return {"path": self.path, "format": self.format}

    @classmethod
    def from_dict(cls, d):
        _only(d, {"path", "format"}, "output")
        return cls(str(d.get("path", "-")), d.get("format", "csv"))

    def check_writable(self):
        if self.path == "-":
            return
        parent = Path(self.path).resolve().parent
        if not parent.is_dir() or not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory {parent} is not writable")


def _default_system():
    return SystemModel.oscillator(1.0, 1.0, MemoryKernel.drude(1.0, 10.0))


@dataclass(frozen=True)
class RunConfig:
    system: SystemModel = field(default_factory=_default_system)
    thermal: ThermalSpec = field(default_factory=lambda: ThermalSpec((0.1, 1.0, 10.0)))
    grid: GridSpec = field(default_factory=lambda: GridSpec(50.0, 1001))
    quad: QuadSpec = field(default_factory=QuadSpec)
    bath: BathSpec = field(default_factory=BathSpec)
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict[str, Any]:
        return {
            "system": self.system.to_dict(),
            "thermal": self.thermal.to_dict(),
            "grid": self.grid.to_dict(),
            "quad": self.quad.to_dict(),
            "bath": self.bath.to_dict(),
            "output": self.output.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RunConfig":
        _only(d, _SECTIONS, "config")
        default = cls()
        return cls(
            system=SystemModel.from_dict(d["system"]) if "system" in d else default.system,
            thermal=ThermalSpec.from_dict(d["thermal"]) if "thermal" in d else default.thermal,
            grid=GridSpec.from_dict(d["grid"]) if "grid" in d else default.grid,
            quad=QuadSpec.from_dict(d["quad"]) if "quad" in d else default.quad,
            bath=BathSpec.from_dict(d["bath"]) if "bath" in d else default.bath,
            output=OutputSpec.from_dict(d["output"]) if "output" in d else default.output,
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(d)


def load_config(path: str | os.PathLike) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return RunConfig.loads(text)
