"""Partition density ``P(omega)`` and the mean kinetic energy it averages.

    P(omega)   = 2 chi''(omega) / (pi M omega)
    E_k(omega) = (hbar omega / 4) coth(hbar omega / 2 k_B T)
    E_k        = int_0^inf E_k(omega) P(omega) d omega
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ._quadrature import integrate_gk
from .errors import AccuracyError, ConfigError, DivergenceError, DomainError
from .response import SystemModel, absorptive, absorptive_over_omega, spectral_features

_SERIES_SWITCH = 1e-4


@dataclass(frozen=True)
class ThermalContext:
    temperature: float
    hbar: float = 1.0
    kB: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.temperature) or self.temperature < 0:
            raise ConfigError(f"temperature must be >= 0, got {self.temperature}")
        if self.hbar <= 0 or self.kB <= 0:
            raise ConfigError("hbar and kB must be positive")

    @property
    def beta(self) -> float:
        return np.inf if self.temperature == 0 else 1.0 / (self.kB * self.temperature)

    @property
    def thermal_energy(self) -> float:
        return self.kB * self.temperature

    @property
    def thermal_frequency(self) -> float:
        """``k_B T / hbar``."""
        return self.kB * self.temperature / self.hbar


def _x_coth_x_scalar(x):
    if abs(x) < _SERIES_SWITCH:
        x2 = x * x
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0
    if x > 350.0:
        return x
    return x * (1.0 + 2.0 / math.expm1(2.0 * x))


def _x_coth_x(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_SWITCH
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        big = xs * (1.0 + 2.0 / np.expm1(2.0 * xs))
    x2 = np.where(small, x, 0.0) ** 2
    return np.where(small, 1.0 + x2 / 3.0 - x2 * x2 / 45.0, big)


def coth_weight(ctx: ThermalContext, omega):
    """``coth(hbar omega / 2 k_B T)``; identically 1 at zero temperature."""
    w = np.asarray(omega, dtype=float)
    if ctx.temperature == 0:
        return np.ones_like(w)[()] if w.ndim == 0 else np.ones_like(w)
    x = ctx.hbar * w / (2.0 * ctx.thermal_energy)
    with np.errstate(divide="ignore", over="ignore"):
        out = np.where(x == 0, np.inf, 1.0 + 2.0 / np.expm1(2.0 * np.where(x == 0, 1.0, x)))
    return out[()] if out.ndim == 0 else out


def kinetic_per_mode(ctx: ThermalContext, omega):
    """Thermal kinetic energy of a weakly damped oscillator of frequency ``omega``."""
    if isinstance(omega, (float, int, np.floating, np.integer)):
        w = float(omega)
        if w < 0:
            raise DomainError("kinetic_per_mode needs omega >= 0")
        if ctx.temperature == 0:
            if w == 0:
                raise DomainError("kinetic energy at T = 0 and omega = 0 is undefined")
            return ctx.hbar * w / 4.0
        x = ctx.hbar * w / (2.0 * ctx.thermal_energy)
        return 0.5 * ctx.thermal_energy * _x_coth_x_scalar(x)
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("kinetic_per_mode needs omega >= 0")
    if ctx.temperature == 0:
        if np.any(w == 0):
            raise DomainError("kinetic energy at T = 0 and omega = 0 is undefined")
        out = ctx.hbar * w / 4.0
    else:
        x = ctx.hbar * w / (2.0 * ctx.thermal_energy)
        out = 0.5 * ctx.thermal_energy * _x_coth_x(x)
    return out[()] if np.ndim(out) == 0 else out


def density(system: SystemModel, omega):
    """Pointwise ``P(omega)``, using the analytic limit at the origin."""
    return 2.0 / (np.pi * system.mass) * absorptive_over_omega(system, omega)


def tail_exponent(system: SystemModel) -> int:
    """Power ``p`` with ``P(omega) ~ omega^-p`` at large omega."""
    return 2 + system.kernel.friction_decay


@dataclass(frozen=True)
class GridSpec:
    omega_max: float
    n_points: int
    spacing: str = "linear"
    omega_min: float | None = None

    def __post_init__(self):
        if not np.isfinite(self.omega_max) or self.omega_max <= 0:
            raise ConfigError(f"omega_max must be positive, got {self.omega_max}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ConfigError(f"n_points must be an integer >= 2, got {self.n_points}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.omega_min is not None and not 0 < self.omega_min < self.omega_max:
            raise ConfigError("omega_min must lie in (0, omega_max)")

    def frequencies(self) -> np.ndarray:
        n = int(self.n_points)
        if self.spacing == "linear":
            return np.linspace(0.0, self.omega_max, n)
        lo = self.omega_min if self.omega_min is not None else 1e-6 * self.omega_max
        return np.concatenate(([0.0], np.geomspace(lo, self.omega_max, n - 1)))

    def to_dict(self) -> dict[str, Any]:
        d = {"omega_max": self.omega_max, "n_points": int(self.n_points), "spacing": self.spacing}
        if self.omega_min is not None:
            d["omega_min"] = self.omega_min
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "GridSpec":
        if not isinstance(d, Mapping):
            raise ConfigError("grid spec must be an object")
        unknown = set(d) - {"omega_max", "n_points", "spacing", "omega_min"}
        if unknown:
            raise ConfigError(f"unknown grid fields: {sorted(unknown)}")
        try:
            return cls(float(d["omega_max"]), d["n_points"], d.get("spacing", "linear"),
                       None if d.get("omega_min") is None else float(d["omega_min"]))
        except KeyError as exc:
            raise ConfigError(f"grid spec missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad grid spec: {exc}") from None


@dataclass(frozen=True)
class PartitionDensity:
    grid: np.ndarray
    values: np.ndarray
    system: SystemModel | None
    tail_exponent: float = field(default=np.inf)
    bin_width: float | None = None  # set for histograms on bin centers

    def total_mass(self) -> float:
        """Trapezoid rule over the grid plus a power-law tail beyond it.

        Histograms are summed bin by bin instead.
        """
        if self.bin_width is not None:
            return float(np.sum(self.values) * self.bin_width)
        mass = float(np.trapezoid(self.values, self.grid))
        p = self.tail_exponent
        if np.isfinite(p) and p > 1:
            mass += self.values[-1] * self.grid[-1] / (p - 1)
        return mass


def partition_density(system: SystemModel, grid_spec: GridSpec) -> PartitionDensity:
    grid = grid_spec.frequencies()
    return PartitionDensity(grid, density(system, grid), system, tail_exponent(system))


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature accuracy request.

    A result is accepted when its error estimate is at most
    ``max(tolerance, rtol * |value|)``.
    """

    tolerance: float = 1e-10
    rtol: float = 1e-10
    tail_fraction: float = 1e-8

    def __post_init__(self):
        if self.tolerance <= 0 or self.rtol < 0 or not 0 < self.tail_fraction < 1:
            raise ConfigError("quadrature tolerances must be positive")

    def to_dict(self) -> dict[str, Any]:
        return {"tolerance": self.tolerance, "rtol": self.rtol, "tail_fraction": self.tail_fraction}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "QuadSpec":
        if not isinstance(d, Mapping):
            raise ConfigError("quad spec must be an object")
        unknown = set(d) - {"tolerance", "rtol", "tail_fraction"}
        if unknown:
            raise ConfigError(f"unknown quad fields: {sorted(unknown)}")
        try:
            return cls(**{k: float(v) for k, v in d.items()})
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad quad spec: {exc}") from None


@dataclass(frozen=True)
class KineticEnergy:
    energy: float
    error: float
    mass: float
    omega_max: float

    @property
    def p2(self) -> float:
        """``<p^2> = 2 M E_k``."""
        return 2.0 * self.mass * self.energy

    def __float__(self):
        return float(self.energy)


def _integrate(f, system, ctx, decay, quad_spec, what):
    tail_start = 40.0 * ctx.thermal_frequency
    value, err, wmax = integrate_gk(f, spectral_features(system), decay, tail_start=tail_start,
                                    rel_tail=quad_spec.tail_fraction,
                                    tail_atol=0.1 * quad_spec.tolerance,
                                    tail_rtol=0.1 * quad_spec.rtol)
    if err > max(quad_spec.tolerance, quad_spec.rtol * abs(value)):
        raise AccuracyError(f"{what}: error estimate {err:.3g} exceeds tolerance",
                            estimate=value, error=err)
    return value, err, wmax


def _check_finite(system, ctx):
    if system.kernel.uv_divergent:
        raise DivergenceError(
            "strict_ohmic friction: P(omega) ~ omega^-2, so the kinetic energy diverges "
            f"logarithmically in the UV tail (T={ctx.temperature})")


def normalization(system: SystemModel, quad_spec: QuadSpec | None = None) -> tuple[float, float]:
    """``int_0^inf P(omega) d omega`` and its error estimate."""
    quad_spec = quad_spec or QuadSpec()
    ctx = ThermalContext(0.0)
    value, err, _ = _integrate(lambda w: float(density(system, w)), system, ctx,
                               tail_exponent(system), quad_spec, "normalization")
    return value, err


def mean_kinetic_energy(system: SystemModel, ctx: ThermalContext,
                        quad_spec: QuadSpec | None = None) -> KineticEnergy:
    """``int_0^inf E_k(omega) P(omega) d omega``."""
    quad_spec = quad_spec or QuadSpec()
    _check_finite(system, ctx)

    def f(w):
        if w == 0 and ctx.temperature == 0:
            return 0.0
        return float(kinetic_per_mode(ctx, w) * density(system, w))

    value, err, wmax = _integrate(f, system, ctx, tail_exponent(system) - 1, quad_spec,
                                  "mean kinetic energy")
    return KineticEnergy(float(value), float(err), system.mass, float(wmax))


def fdt_kinetic_energy(system: SystemModel, ctx: ThermalContext,
                       quad_spec: QuadSpec | None = None) -> KineticEnergy:
    """Kinetic energy from ``<p^2> = (hbar/pi) int coth(hbar w / 2 k_B T) chi''(w) dw``."""
    quad_spec = quad_spec or QuadSpec()
    _check_finite(system, ctx)
    M = system.mass

    def f(w):
        if w == 0:
            if ctx.temperature == 0:
                return 0.0
            return float(2.0 * ctx.thermal_frequency * absorptive_over_omega(system, 0.0))
        return float(coth_weight(ctx, w) * absorptive(system, w))

    p2, err, wmax = _integrate(f, system, ctx, tail_exponent(system) - 1,
                               QuadSpec(quad_spec.tolerance * np.pi / ctx.hbar * 2 * M,
                                        quad_spec.rtol, quad_spec.tail_fraction),
                               "fdt kinetic energy")
    p2 *= ctx.hbar / np.pi
    err *= ctx.hbar / np.pi
    return KineticEnergy(float(p2 / (2 * M)), float(err / (2 * M)), M, float(wmax))
