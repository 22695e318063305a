"""Independent numerical checks of the susceptibility and the partition density.

Everything here integrates with composite Gauss-Legendre
(:func:`qpartition._quadrature.integrate_gl`), never with the adaptive
Gauss-Kronrod route used by :mod:`qpartition.partition`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from ._quadrature import composite_gl, integrate_gl, panel_edges
from .errors import AccuracyError, ConfigError, DomainError
from .kernels import MemoryKernel
from .partition import QuadSpec, ThermalContext, mean_kinetic_energy
from .response import (SystemModel, absorptive, spectral_features, susceptibility,
                       susceptibility_imag_axis)

PV_EXCISION = 1e-3
PV_SELF_TEST = 1e-8


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``tolerance`` is relative to ``scale`` (``kind='rel'``) or absolute.
    """

    check_name: str
    expected: float
    computed: float
    tolerance: float
    kind: str = "rel"
    scale: float | None = None
    provenance: str = ""
    details: dict = field(default_factory=dict)
    passed: bool = field(init=False)

    def __post_init__(self):
        diff = abs(self.computed - self.expected)
        if self.kind == "rel":
            ref = self.scale if self.scale is not None else abs(self.expected)
            ok = diff <= self.tolerance * ref
        elif self.kind == "abs":
            ok = diff <= self.tolerance
        else:
            raise ConfigError(f"unknown tolerance kind {self.kind!r}")
        object.__setattr__(self, "passed", bool(ok and np.isfinite(self.computed)))

    @property
    def deviation(self) -> float:
        return abs(self.computed - self.expected)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["deviation"] = self.deviation
        return d


def _gl(system, f, lower=0.0):
    value, err, _ = integrate_gl(f, spectral_features(system), lower=lower)
    return value, err


def _pv_integral(system, omega, delta):
    """``P.V. int_0^inf f(u) / (u - omega) du`` with ``f(u) = u chi''(u) / (u + omega)``.

    Pairing ``omega +- s`` for ``s < omega`` cancels the pole; the window
    ``s < delta`` is replaced by the leading odd-part term ``2 delta f'(omega)``.
    """
    def f(u):
        return u * absorptive(system, u) / (u + omega)

    h = delta
    fp = (8 * (f(omega + h) - f(omega - h)) - (f(omega + 2 * h) - f(omega - 2 * h))) / (12 * h)
    local = 2 * delta * fp

    feats = [(abs(c - omega), w) for c, w in spectral_features(system)] + [(0.0, delta)]
    edges = panel_edges(feats, hi_factor=1.0)
    edges = np.unique(np.clip(np.concatenate((edges, [delta, omega])), delta, omega))

    def paired(s):
        return (f(omega + s) - f(omega - s)) / s

    near = composite_gl(paired, edges[:-1], edges[1:], 32).sum()
    near_lo = composite_gl(paired, edges[:-1], edges[1:], 16).sum()
    far, far_err = _gl(system, lambda u: f(u) / (u - omega), lower=2 * omega)
    return local + near + far, abs(near - near_lo) + far_err


def kk_real_from_imag(system: SystemModel, omega: float, *, delta_factor: float = PV_EXCISION,
                      self_test: bool = True) -> float:
    """``chi'(omega) = (2/pi) P.V. int_0^inf u chi''(u) / (u^2 - omega^2) du``.

    The excision half-width is ``delta_factor`` times ``omega`` or, near a
    narrow line, times the line's local scale.  With ``self_test`` it is
    halved and the results must agree to ``PV_SELF_TEST * max(|chi'|, M)``.
    """
    if omega < 0:
        raise DomainError("kk_real_from_imag needs omega >= 0")
    if omega == 0:
        value, _ = _gl(system, lambda u: u * absorptive(system, u) / (u * u))
        return 2.0 / np.pi * value
    local_scale = min([omega] + [max(w, abs(c - omega)) for c, w in spectral_features(system)])
    delta = delta_factor * local_scale
    value, err = _pv_integral(system, omega, delta)
    value *= 2.0 / np.pi
    if self_test:
        half = 2.0 / np.pi * _pv_integral(system, omega, delta / 2)[0]
        if abs(half - value) > PV_SELF_TEST * max(abs(value), system.mass):
            raise AccuracyError(
                f"principal value moved by {abs(half - value):.3g} when halving delta",
                estimate=value, error=2 / np.pi * err)
    return value


def sum_rule_check(system: SystemModel, *, mass_prefactor: bool = True,
                   tolerance: float = 1e-6) -> VerificationReport:
    """``(2 / pi M) int_0^inf chi''(omega) / omega d omega == 1``.

    ``mass_prefactor=False`` drops the ``1/M``, reproducing a normalization
    that only holds for unit mass.
    """
    value, err = _gl(system, lambda w: absorptive(system, w) / w)
    pref = 2.0 / (np.pi * system.mass) if mass_prefactor else 2.0 / np.pi
    return VerificationReport(
        "sum_rule", 1.0, pref * value, tolerance, "abs",
        provenance="normalization of P(omega); equivalently chi(0) = M",
        details={"system": system.to_dict(), "quad_error": pref * err,
                 "mass_prefactor": mass_prefactor})


def static_susceptibility_check(system: SystemModel, tolerance: float = 1e-4) -> VerificationReport:
    """Kramers-Kronig at ``omega = 0`` against the mass."""
    return VerificationReport(
        "kk_static", system.mass, kk_real_from_imag(system, 0.0), tolerance, "rel",
        provenance="chi(0) = M from the dispersion relation",
        details={"system": system.to_dict()})


def kk_check(system: SystemModel, omega: float, tolerance: float = 1e-4) -> VerificationReport:
    """Kramers-Kronig ``chi'(omega)`` against the closed form.

    Relative to ``max(|chi'|, M)`` so zero crossings of ``chi'`` stay meaningful.
    """
    expected = float(np.real(susceptibility(system, omega)))
    computed = kk_real_from_imag(system, omega)
    return VerificationReport(
        "kk_real", expected, computed, tolerance, "rel", scale=max(abs(expected), system.mass),
        provenance="closed-form real part", details={"system": system.to_dict(), "omega": omega})


def imag_axis_identity(system: SystemModel, omega: float, tolerance: float = 1e-6) -> VerificationReport:
    """``chi(i omega) == (2/pi) int_0^inf u chi''(u) / (omega^2 + u^2) du``."""
    if not omega > 0:
        raise DomainError("imag_axis_identity needs omega > 0")
    value, err = _gl(system, lambda u: u * absorptive(system, u) / (omega * omega + u * u))
    return VerificationReport(
        "imag_axis", float(susceptibility_imag_axis(system, omega)), 2.0 / np.pi * value,
        tolerance, "rel", provenance="analytic continuation of the closed form",
        details={"system": system.to_dict(), "omega": omega, "quad_error": 2 / np.pi * err})


def classical_limit_check(system: SystemModel, ctx: ThermalContext,
                          quad_spec: QuadSpec | None = None) -> VerificationReport:
    """``E_k / (k_B T / 2) -> 1``: 1% at ``k_B T >= 100 hbar w``, 0.1% at ``1000 hbar w``.

    ``w`` is the system's frequency scale.  Divergent kernels propagate
    :class:`~qpartition.errors.DivergenceError`.
    """
    ratio_T = ctx.thermal_energy / (ctx.hbar * system.frequency_scale)
    if ratio_T < 100 * (1 - 1e-12):
        raise ConfigError(
            f"classical limit needs k_B T >= 100 hbar omega_scale; got {ratio_T:.3g} x")
    tol = 1e-3 if ratio_T >= 1000 * (1 - 1e-12) else 1e-2
    ek = mean_kinetic_energy(system, ctx, quad_spec)
    return VerificationReport(
        "classical_limit", 1.0, ek.energy / (0.5 * ctx.thermal_energy), tol, "abs",
        provenance="equipartition k_B T / 2",
        details={"system": system.to_dict(), "temperature": ctx.temperature,
                 "kT_over_hbar_omega_scale": ratio_T})


# Reference systems for the CLI suite; non-unit mass so a dropped 1/M shows.
def default_systems(mass: float = 2.0, omega0: float = 1.5) -> list[SystemModel]:
    kernels = [MemoryKernel.drude(1.0, 10.0), MemoryKernel.strict_ohmic(1.0),
               MemoryKernel.algebraic_cutoff(1.0, 10.0)]
    out = []
    for k in kernels:
        out.append(SystemModel.free(mass, k))
        out.append(SystemModel.oscillator(mass, omega0, k))
    return out


def _system_checks(system: SystemModel, mass_prefactor: bool, hbar: float, kB: float):
    s = system.frequency_scale
    tasks: list[Callable[[], VerificationReport]] = [
        lambda: sum_rule_check(system, mass_prefactor=mass_prefactor),
        lambda: static_susceptibility_check(system),
    ]
    for w in (0.3 * s, s, 3 * s):
        tasks.append(lambda w=w: kk_check(system, w))
    for w in (0.1 * s, s, 10 * s):
        tasks.append(lambda w=w: imag_axis_identity(system, w))
    if not system.kernel.uv_divergent:
        ctx = ThermalContext(1000 * hbar * s / kB, hbar, kB)
        tasks.append(lambda: classical_limit_check(system, ctx))
    return tasks


def run_suite(systems: Iterable[SystemModel] | None = None, *, mass_prefactor: bool = True,
              hbar: float = 1.0, kB: float = 1.0, jobs: int = 1) -> list[VerificationReport]:
    """All checks for every system, in deterministic order."""
    systems = list(systems) if systems is not None else default_systems()
    tasks = [t for s in systems for t in _system_checks(s, mass_prefactor, hbar, kB)]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(lambda t: t(), tasks))
    return [t() for t in tasks]
