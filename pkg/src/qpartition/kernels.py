"""Memory-friction kernels of the generalized Langevin equation.

Each kernel is described by its Laplace transform ``gamma_hat(z)`` and the
equivalent harmonic-bath spectral density ``J(omega) = omega * Re gamma_hat(-i omega)``.
All families are normalized so that ``gamma_hat(0) == gamma0``.

    ===============  ======================================  ==========================
    model            gamma_hat(z)                            J(omega)
    ===============  ======================================  ==========================
    drude            g0 wc / (z + wc)                        g0 w wc^2 / (w^2 + wc^2)
    strict_ohmic     g0                                      g0 w
    algebraic        g0 wc (z + 2 wc) / (2 (z + wc)^2)       g0 w wc^4 / (w^2 + wc^2)^2
    ===============  ======================================  ==========================

The algebraic-cutoff kernel is ``gamma(t) = (g0 wc / 2) (1 + wc t) exp(-wc t)``,
whose spectral density falls off as ``omega^-3``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError, DomainError


class KernelModel(str, enum.Enum):
    DRUDE = "drude"
    STRICT_OHMIC = "strict_ohmic"
    ALGEBRAIC_CUTOFF = "algebraic_cutoff"


_ALIASES = {
    "drude": KernelModel.DRUDE,
    "strict_ohmic": KernelModel.STRICT_OHMIC,
    "strictohmic": KernelModel.STRICT_OHMIC,
    "ohmic": KernelModel.STRICT_OHMIC,
    "algebraic_cutoff": KernelModel.ALGEBRAIC_CUTOFF,
    "algebraiccutoff": KernelModel.ALGEBRAIC_CUTOFF,
    "algebraic": KernelModel.ALGEBRAIC_CUTOFF,
}

# Large-omega decay power of Re gamma_hat(-i omega).
_FRICTION_DECAY = {
    KernelModel.DRUDE: 2,
    KernelModel.STRICT_OHMIC: 0,
    KernelModel.ALGEBRAIC_CUTOFF: 4,
}


@dataclass(frozen=True)
class MemoryKernel:
    """A dissipation model.

    Args:
        model: functional family.
        gamma0: static friction ``gamma_hat(0)`` (mass / time).
        omega_c: cutoff frequency; ignored by ``strict_ohmic``.
    """

    model: KernelModel
    gamma0: float
    omega_c: float | None = None

    def __post_init__(self):
        model = _ALIASES.get(str(getattr(self.model, "value", self.model)).lower())
        if model is None:
            raise ConfigError(f"unknown kernel model {self.model!r}")
        object.__setattr__(self, "model", model)
        if not np.isfinite(self.gamma0) or self.gamma0 <= 0:
            raise ConfigError(f"gamma0 must be positive, got {self.gamma0}")
        if model is KernelModel.STRICT_OHMIC:
            object.__setattr__(self, "omega_c", None)
        elif self.omega_c is None or not np.isfinite(self.omega_c) or self.omega_c <= 0:
            raise ConfigError(f"{model.value} kernel needs omega_c > 0, got {self.omega_c}")
        object.__setattr__(self, "gamma0", float(self.gamma0))
        if self.omega_c is not None:
            object.__setattr__(self, "omega_c", float(self.omega_c))

    @classmethod
    def drude(cls, gamma0: float, omega_c: float) -> "MemoryKernel":
        return cls(KernelModel.DRUDE, gamma0, omega_c)

    @classmethod
    def strict_ohmic(cls, gamma0: float) -> "MemoryKernel":
        return cls(KernelModel.STRICT_OHMIC, gamma0)

    @classmethod
    def algebraic_cutoff(cls, gamma0: float, omega_c: float) -> "MemoryKernel":
        return cls(KernelModel.ALGEBRAIC_CUTOFF, gamma0, omega_c)

    @property
    def uv_divergent(self) -> bool:
        """True when the mean kinetic energy has a logarithmic UV divergence.

        Memoryless friction leaves ``P(omega) ~ omega^-2`` so that
        ``int omega P(omega) d omega`` diverges.
        """
        return self.model is KernelModel.STRICT_OHMIC

    @property
    def friction_decay(self) -> int:
        """Power ``q`` with ``Re gamma_hat(-i omega) ~ omega^-q`` at large omega."""
        return _FRICTION_DECAY[self.model]

    @property
    def frequency_scale(self) -> float:
        """Cutoff frequency, or 0 for kernels without one."""
        return self.omega_c or 0.0

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"model": self.model.value, "gamma0": self.gamma0}
        if self.omega_c is not None:
            d["omega_c"] = self.omega_c
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "MemoryKernel":
        if not isinstance(d, Mapping):
            raise ConfigError(f"kernel spec must be an object, got {type(d).__name__}")
        unknown = set(d) - {"model", "gamma0", "omega_c"}
        if unknown:
            raise ConfigError(f"unknown kernel fields: {sorted(unknown)}")
        try:
            return cls(d["model"], float(d["gamma0"]),
                       None if d.get("omega_c") is None else float(d["omega_c"]))
        except KeyError as exc:
            raise ConfigError(f"kernel spec missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad kernel spec: {exc}") from None


def laplace_kernel(kernel: MemoryKernel, z):
    """Laplace transform ``gamma_hat(z)`` of the memory kernel.

    ``z`` may be any array of complex numbers with ``Re z >= 0``; the
    boundary ``z = -i omega`` is where the susceptibilities are evaluated.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.real < -1e-14 * np.maximum(1.0, np.abs(z))):
        raise DomainError("laplace_kernel is defined for Re z >= 0 only")
    g0 = kernel.gamma0
    if kernel.model is KernelModel.STRICT_OHMIC:
        out = np.full(z.shape, g0, dtype=complex)
    else:
        wc = kernel.omega_c
        if np.any(z + wc == 0):
            raise DomainError(f"pole of gamma_hat at z = {-wc}")
        if kernel.model is KernelModel.DRUDE:
            out = g0 * wc / (z + wc)
        else:
            out = g0 * wc * (z + 2 * wc) / (2 * (z + wc) ** 2)
        # On the imaginary axis Re gamma_hat decays faster than |gamma_hat|;
        # take it from the closed form instead of a cancelling difference.
        axis = z.real == 0
        if np.any(axis):
            out = np.where(axis, friction_real(kernel, z.imag) + 1j * out.imag, out)
    return out[()] if out.ndim == 0 else out


def friction_real(kernel: MemoryKernel, omega):
    """``Re gamma_hat(-i omega)`` in closed form (even in omega, non-negative)."""
    w = np.asarray(omega, dtype=float)
    g0 = kernel.gamma0
    if kernel.model is KernelModel.STRICT_OHMIC:
        out = np.full(w.shape, g0)
    elif kernel.model is KernelModel.DRUDE:
        wc2 = kernel.omega_c ** 2
        out = g0 * wc2 / (w * w + wc2)
    else:
        wc2 = kernel.omega_c ** 2
        out = g0 * (wc2 / (w * w + wc2)) ** 2
    return out[()] if out.ndim == 0 else out


def boundary_value(kernel: MemoryKernel, omega: float) -> complex:
    """``gamma_hat(-i omega)`` for one real ``omega``, in plain float arithmetic.

    Same values as :func:`laplace_kernel` on the imaginary axis; this is the
    hot path of adaptive quadrature, where numpy's per-call overhead dominates.
    """
    g0, w = kernel.gamma0, float(omega)
    if kernel.model is KernelModel.STRICT_OHMIC:
        return complex(g0, 0.0)
    wc = kernel.omega_c
    r = wc * wc + w * w
    if kernel.model is KernelModel.DRUDE:
        return complex(g0 * wc * wc / r, g0 * wc * w / r)
    q = wc * wc / r
    return complex(g0 * q * q, g0 * wc * w * (3 * wc * wc + w * w) / (2 * r * r))


def spectral_density(kernel: MemoryKernel, omega):
    """Caldeira-Leggett spectral density ``J(omega)`` for ``omega >= 0``."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("spectral_density requires omega >= 0")
    out = w * friction_real(kernel, w)
    return out[()] if np.ndim(out) == 0 else out
