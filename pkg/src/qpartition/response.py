"""Momentum susceptibility of a damped particle.

For a particle of mass ``M`` in a harmonic trap of frequency ``omega0``
obeying the generalized Langevin equation with friction kernel
``gamma_hat``, the momentum-momentum susceptibility is

    chi(omega) = M (M omega0^2 - i omega g) / (M (omega0^2 - omega^2) - i omega g),
    g = gamma_hat(-i omega).

At ``omega0 = 0`` this reduces to the free-particle form
``M g / (g - i omega M)``.  Both satisfy ``chi(0) = M``.  See
``docs/oscillator_susceptibility.md`` for the Laplace-domain derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, DomainError, SingularityError
from .kernels import MemoryKernel, boundary_value, laplace_kernel

_DENOM_FLOOR = 1e-14


@dataclass(frozen=True)
class SystemModel:
    """One degree of freedom of mass ``mass`` pinned at ``omega0`` (0 = free)."""

    mass: float
    omega0: float
    kernel: MemoryKernel

    def __post_init__(self):
        if not np.isfinite(self.mass) or self.mass <= 0:
            raise ConfigError(f"mass must be positive, got {self.mass}")
        if not np.isfinite(self.omega0) or self.omega0 < 0:
            raise ConfigError(f"omega0 must be >= 0, got {self.omega0}")
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "omega0", float(self.omega0))

    @classmethod
    def free(cls, mass: float, kernel: MemoryKernel) -> "SystemModel":
        return cls(mass, 0.0, kernel)

    @classmethod
    def oscillator(cls, mass: float, omega0: float, kernel: MemoryKernel) -> "SystemModel":
        if omega0 <= 0:
            raise ConfigError("an oscillator needs omega0 > 0")
        return cls(mass, omega0, kernel)

    @property
    def is_free(self) -> bool:
        return self.omega0 == 0.0

    @property
    def frequency_scale(self) -> float:
        """``max(omega0, gamma0 / M, omega_c)``."""
        return max(self.omega0, self.kernel.gamma0 / self.mass, self.kernel.frequency_scale)

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": "free" if self.is_free else "oscillator",
            "mass": self.mass,
            "omega0": self.omega0,
            "kernel": self.kernel.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SystemModel":
        if not isinstance(d, Mapping):
            raise ConfigError("system spec must be an object")
        unknown = set(d) - {"model", "mass", "omega0", "kernel"}
        if unknown:
            raise ConfigError(f"unknown system fields: {sorted(unknown)}")
        if "kernel" not in d:
            raise ConfigError("system spec missing field 'kernel'")
        kernel = MemoryKernel.from_dict(d["kernel"])
        model = d.get("model")
        try:
            mass = float(d.get("mass", 1.0))
            omega0 = float(d.get("omega0", 0.0 if model in (None, "free") else 1.0))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad system spec: {exc}") from None
        if model == "free":
            if omega0 != 0.0:
                raise ConfigError("free particle must have omega0 = 0")
            return cls.free(mass, kernel)
        if model == "oscillator":
            return cls.oscillator(mass, omega0, kernel)
        if model is None:
            return cls(mass, omega0, kernel)
        raise ConfigError(f"unknown system model {model!r}; expected 'free' or 'oscillator'")


def _check_denominator(den, omega):
    bad = (np.abs(den) < _DENOM_FLOOR) & (omega != 0)
    if np.any(bad):
        raise SingularityError(f"susceptibility denominator vanishes at omega={omega[bad][0]}")


def _boundary_friction(kernel, w):
    # gamma_hat(-i omega) is even in Re, odd in Im; evaluate at |omega| then conjugate.
    g = laplace_kernel(kernel, -1j * np.abs(w))
    return np.where(w < 0, np.conj(g), g)


def susceptibility_free(system: SystemModel, omega):
    """``chi(omega) = M g / (g - i omega M)`` with ``chi(0) = M`` exactly."""
    if not system.is_free:
        raise DomainError("susceptibility_free needs omega0 = 0")
    w = np.asarray(omega, dtype=float)
    M = system.mass
    g = _boundary_friction(system.kernel, w)
    den = g - 1j * w * M
    _check_denominator(den, w)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(w == 0, M + 0j, M * g / den)
    return out[()] if out.ndim == 0 else out


def susceptibility_oscillator(system: SystemModel, omega):
    """Pinned-particle momentum susceptibility; ``chi(0) = M`` exactly."""
    if system.is_free:
        raise DomainError("susceptibility_oscillator needs omega0 > 0")
    w = np.asarray(omega, dtype=float)
    M, w0 = system.mass, system.omega0
    g = _boundary_friction(system.kernel, w)
    den = M * (w0 - w) * (w0 + w) - 1j * w * g
    _check_denominator(den, w)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(w == 0, M + 0j, M * (M * w0 * w0 - 1j * w * g) / den)
    return out[()] if out.ndim == 0 else out


def _scalar_susceptibility(system, w):
    if w == 0:
        return complex(system.mass)
    g = boundary_value(system.kernel, abs(w))
    if w < 0:
        g = g.conjugate()
    M, w0 = system.mass, system.omega0
    if system.is_free:
        num, den = M * g, g - 1j * w * M
    else:
        num, den = M * (M * w0 * w0 - 1j * w * g), M * (w0 - w) * (w0 + w) - 1j * w * g
    if abs(den) < _DENOM_FLOOR:
        raise SingularityError(f"susceptibility denominator vanishes at omega={w}")
    return num / den


def susceptibility(system: SystemModel, omega):
    if isinstance(omega, (float, int, np.floating, np.integer)):
        return _scalar_susceptibility(system, float(omega))
    if system.is_free:
        return susceptibility_free(system, omega)
    return susceptibility_oscillator(system, omega)


def absorptive(system: SystemModel, omega):
    """Imaginary part ``chi''(omega)``."""
    return np.imag(susceptibility(system, omega))


def absorptive_over_omega(system: SystemModel, omega):
    """``chi''(omega) / omega`` with its analytic value at the origin.

    The limit is ``M^2 / gamma0`` for the free particle and 0 for the
    oscillator, whose absorptive part starts at ``omega^3``.
    """
    if system.is_free:
        limit = system.mass ** 2 / system.kernel.gamma0
    else:
        limit = 0.0
    if isinstance(omega, (float, int, np.floating, np.integer)):
        w = float(omega)
        return limit if w == 0 else _scalar_susceptibility(system, w).imag / w
    w = np.asarray(omega, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        safe = np.where(w == 0, 1.0, w)
        out = np.where(w == 0, limit, absorptive(system, safe) / safe)
    return out[()] if out.ndim == 0 else out


def susceptibility_imag_axis(system: SystemModel, omega):
    """``chi(i omega)`` for ``omega > 0``, continued analytically; real-valued."""
    nu = np.asarray(omega, dtype=float)
    if np.any(nu <= 0):
        raise DomainError("susceptibility_imag_axis needs omega > 0")
    M, w0 = system.mass, system.omega0
    g = np.real(laplace_kernel(system.kernel, nu + 0j))
    if system.is_free:
        out = M * g / (nu * M + g)
    else:
        out = M * (M * w0 * w0 + nu * g) / (M * (w0 * w0 + nu * nu) + nu * g)
    return out[()] if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Susceptibility:
    """Callable view ``omega -> chi(omega)`` of a system's response."""

    system: SystemModel

    def __call__(self, omega):
        return susceptibility(self.system, omega)

    def real(self, omega):
        return np.real(self(omega))

    def imag(self, omega):
        return np.imag(self(omega))

    def imag_axis(self, omega):
        return susceptibility_imag_axis(self.system, omega)

    @property
    def static(self) -> float:
        return self.system.mass


def spectral_features(system: SystemModel) -> list[tuple[float, float]]:
    """``(center, width)`` pairs locating structure in ``chi''(omega)``.

    Includes the origin at every intrinsic scale and each resonance of the
    denominator, where the absorptive line can be much narrower than any
    bare parameter (e.g. a trap above a low Drude cutoff).
    """
    M, w0 = system.mass, system.omega0
    k = system.kernel
    scales = {w0, k.gamma0 / M, k.frequency_scale}
    feats = [(0.0, s) for s in sorted(scales) if s > 0]

    def re_den(w):
        g = laplace_kernel(k, -1j * w)
        return (M * (w0 - w) * (w0 + w) + w * g.imag) / w

    def im_den(w):
        return -w * laplace_kernel(k, -1j * w).real

    s = system.frequency_scale
    grid = np.geomspace(1e-6 * s, 1e4 * s, 801)
    vals = np.array([re_den(w) for w in grid])
    for i in np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]:
        wr = brentq(re_den, grid[i], grid[i + 1], xtol=1e-15 * grid[i], rtol=1e-15)
        h = 1e-6 * wr
        slope = (re_den(wr + h) - re_den(wr - h)) / (2 * h) * wr
        width = abs(im_den(wr)) / max(abs(slope), 1e-300)
        feats.append((wr, min(width, wr)))
    return feats
