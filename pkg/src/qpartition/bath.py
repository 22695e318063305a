"""Finite Caldeira-Leggett bath: exact normal modes and Gibbs-state kinetic energy.

A particle of mass ``M`` pinned at ``omega0`` couples bilinearly to ``N`` bath
oscillators.  In mass-weighted coordinates ``y0 = sqrt(M) x``,
``yn = sqrt(m_n) q_n`` the potential matrix is an arrowhead

    V00 = omega0^2 + sum_n c_n^2 / (M m_n omega_n^2)      (counter-term included)
    V0n = -c_n / sqrt(M m_n)
    Vnn = omega_n^2

Its eigenvalues are ``Omega_k^2``; the squared first components of the
eigenvectors are the weights ``w_k`` with which the particle's momentum
projects on each mode, so that ``<p^2> / 2M = sum_k w_k E_k(Omega_k)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, NumericalError
from .kernels import MemoryKernel, spectral_density
from .partition import PartitionDensity, ThermalContext, kinetic_per_mode
from .response import SystemModel

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-3
_DENSE_MAX = 400
_CHUNK_ELEMENTS = 2_000_000
_MAX_ITER = 200
_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class FiniteBath:
    system_mass: float
    omega0: float
    bath_frequencies: np.ndarray
    couplings: np.ndarray
    bath_masses: np.ndarray
    epsilon: float | None = None  # set when omega0 is a free-particle proxy

    def __post_init__(self):
        if self.system_mass <= 0:
            raise ConfigError("system_mass must be positive")
        if self.omega0 <= 0:
            raise ConfigError("the finite bath needs omega0 > 0; use a small pinning for a free particle")
        w = np.asarray(self.bath_frequencies, dtype=float)
        if w.size and (np.any(w <= 0) or np.any(np.diff(w) <= 0)):
            raise ConfigError("bath frequencies must be positive and strictly increasing")
        if np.shape(self.couplings) != w.shape or np.shape(self.bath_masses) != w.shape:
            raise ConfigError("couplings and bath_masses must match bath_frequencies")
        if np.any(np.asarray(self.bath_masses) <= 0):
            raise ConfigError("bath masses must be positive")

    @property
    def size(self) -> int:
        return len(self.bath_frequencies)

    def arrowhead(self, counterterm: bool = True):
        """``(V00, V0n, Vnn)`` of the mass-weighted potential matrix."""
        M = self.system_mass
        w = np.asarray(self.bath_frequencies, dtype=float)
        c = np.asarray(self.couplings, dtype=float)
        m = np.asarray(self.bath_masses, dtype=float)
        alpha = self.omega0 ** 2
        if counterterm and w.size:
            alpha = alpha + np.sum(c * c / (M * m * w * w))
        return float(alpha), -c / np.sqrt(M * m), w * w

    def potential_matrix(self, counterterm: bool = True) -> np.ndarray:
        alpha, z, d = self.arrowhead(counterterm)
        V = np.diag(np.concatenate(([alpha], d)))
        V[0, 1:] = z
        V[1:, 0] = z
        return V


@dataclass(frozen=True, eq=False)
class NormalModes:
    frequencies: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.frequencies)


def build_bath(kernel: MemoryKernel, system: SystemModel, N: int, omega_max: float,
               epsilon: float = DEFAULT_EPSILON, placement: str = "midpoint") -> FiniteBath:
    """Discretize ``J(omega)`` on a uniform grid of spacing ``omega_max / N``, unit bath masses.

    ``c_n^2 = (2/pi) m_n omega_n J(omega_n) d_omega`` so that
    ``sum_n c_n^2 cos(omega_n t) / (m_n omega_n^2)`` tends to the memory kernel.
    ``placement='midpoint'`` puts ``omega_n = (n - 1/2) d_omega``;
    ``'right'`` puts ``omega_n = n d_omega``, which drops half a bin of the
    static friction at the origin and converges only as O(d_omega).
    A free particle is pinned at ``epsilon``.
    """
    if int(N) != N or N < 1:
        raise ConfigError(f"N must be a positive integer, got {N}")
    if not omega_max > 0:
        raise ConfigError(f"omega_max must be positive, got {omega_max}")
    if placement not in ("midpoint", "right"):
        raise ConfigError(f"placement must be 'midpoint' or 'right', got {placement!r}")
    N = int(N)
    dw = omega_max / N
    w = dw * (np.arange(1, N + 1) - (0.5 if placement == "midpoint" else 0.0))
    m = np.ones(N)
    J = spectral_density(kernel, w)
    if not np.any(J > 0):
        raise NumericalError("spectral density vanishes on every bath frequency")
    c = np.sqrt(2.0 / np.pi * m * w * J * dw)
    if system.is_free:
        if not epsilon > 0:
            raise ConfigError("free-particle proxy needs epsilon > 0")
        return FiniteBath(system.mass, float(epsilon), w, c, m, epsilon=float(epsilon))
    return FiniteBath(system.mass, system.omega0, w, c, m)


def _check_positive(bath, alpha, z, d):
    # Schur complement of the bath block: det V / det D has the sign of this.
    schur = alpha - np.sum(z * z / d) if d.size else alpha
    if not schur > 0:
        raise NumericalError(
            f"potential matrix is not positive definite: Schur complement {schur:.6g} "
            f"(omega0^2 = {bath.omega0 ** 2:.6g}, alpha = {alpha:.6g}); "
            "the counter-term keeps it equal to omega0^2")


def _dense_modes(alpha, z, d):
    V = np.diag(np.concatenate(([alpha], d)))
    V[0, 1:] = z
    V[1:, 0] = z
    lam, U = np.linalg.eigh(V)
    if lam[0] <= 0:
        cond = lam[-1] / abs(lam[0]) if lam[0] != 0 else np.inf
        raise NumericalError(f"nonpositive eigenvalue {lam[0]:.6g} (condition estimate {cond:.3g})")
    return lam, U[0] ** 2


def _secular_chunk(alpha, z2, d, rows):
    """Roots of ``alpha - lam - sum z2 / (d - lam)`` in the intervals ``rows``.

    Interval ``k`` lies between ``d[k-1]`` and ``d[k]`` (``0`` below, a norm
    bound above).  Each root is found as an offset ``tau`` from the nearer
    pole so that ``d - lam`` keeps full relative accuracy.
    """
    N = d.size
    K = rows.size
    upper = max(alpha, d[-1]) + np.sqrt(z2.sum())
    left = np.where(rows == 0, 0.0, d[np.maximum(rows - 1, 0)])
    right = np.where(rows == N, upper, d[np.minimum(rows, N - 1)])
    mid = 0.5 * (left + right)
    fmid = alpha - mid - (z2[None, :] / (d[None, :] - mid[:, None])).sum(axis=1)

    # origin index into d, or -1 for the pole-free origin at 0
    use_right = (fmid > 0) & (rows < N)
    origin = np.where(use_right, rows, rows - 1)
    d_o = np.where(origin >= 0, d[np.maximum(origin, 0)], 0.0)
    c = np.where(origin >= 0, z2[np.maximum(origin, 0)], 0.0)
    lo = np.where(use_right, mid - d_o, 0.0)
    hi = np.where(use_right, 0.0, np.where(rows == N, upper, mid) - d_o)

    delta = d[None, :] - d_o[:, None]
    Z = np.broadcast_to(z2, (K, N)).copy()
    idx = np.nonzero(origin >= 0)[0]
    Z[idx, origin[idx]] = 0.0
    shift = alpha - d_o
    sign = np.where(use_right, -1.0, 1.0)

    tau = 0.5 * (lo + hi)
    active = np.ones(K, dtype=bool)
    for _ in range(_MAX_ITER):
        if not active.any():
            break
        a_idx = np.nonzero(active)[0]
        t = tau[a_idx]
        inv = 1.0 / (delta[a_idx] - t[:, None])
        q = Z[a_idx] * inv
        psi = shift[a_idx] - t - q.sum(axis=1)
        dpsi = -1.0 - (q * inv).sum(axis=1)
        cc = c[a_idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            f = psi + np.where(cc > 0, cc / t, 0.0)
        pos = f > 0
        lo[a_idx] = np.where(pos, t, lo[a_idx])
        hi[a_idx] = np.where(pos, hi[a_idx], t)

        b = psi - dpsi * t
        with np.errstate(divide="ignore", invalid="ignore"):
            sq = np.sqrt(b * b - 4.0 * dpsi * cc)
            qq = -0.5 * (b + np.where(b >= 0, sq, -sq))
            r1 = qq / dpsi
            r2 = cc / qq
            pick = np.where(np.sign(r1) == sign[a_idx], r1, r2)
            new = np.where(cc > 0, pick, -b / dpsi)
        l, h = lo[a_idx], hi[a_idx]
        bad = ~((new > l) & (new < h)) | ~np.isfinite(new)
        same = (l * h > 0)
        bis = np.where(same, np.sign(h) * np.sqrt(np.abs(l * h)), 0.5 * (l + h))
        new = np.where(bad, bis, new)
        width = h - l
        done = (np.abs(new - t) <= 4 * _EPS * np.abs(new)) | (width <= 4 * _EPS * np.maximum(np.abs(l), np.abs(h)))
        done |= f == 0
        tau[a_idx] = np.where(f == 0, t, new)
        active[a_idx[done]] = False
    if active.any():
        raise NumericalError(f"secular equation did not converge for {active.sum()} roots")

    inv = 1.0 / (delta - tau[:, None])
    s = (Z * inv * inv).sum(axis=1)
    with np.errstate(divide="ignore"):
        s += np.where(c > 0, c / (tau * tau), 0.0)
    return d_o + tau, 1.0 / (1.0 + s)


def _arrowhead_modes(alpha, z, d):
    z2 = z * z
    live = z2 > 0
    dz, z2z = d[live], z2[live]
    n = dz.size
    lam = np.empty(n + 1)
    wts = np.empty(n + 1)
    step = max(1, _CHUNK_ELEMENTS // max(n, 1))
    for start in range(0, n + 1, step):
        rows = np.arange(start, min(n + 1, start + step))
        lam[rows], wts[rows] = _secular_chunk(alpha, z2z, dz, rows)
    if (~live).any():
        lam = np.concatenate((lam, d[~live]))
        wts = np.concatenate((wts, np.zeros((~live).sum())))
        order = np.argsort(lam, kind="stable")
        lam, wts = lam[order], wts[order]
    if lam[0] <= 0:
        raise NumericalError(f"nonpositive eigenvalue {lam[0]:.6g}")
    return lam, wts


def normal_modes(bath: FiniteBath, method: str = "auto", counterterm: bool = True) -> NormalModes:
    """Normal-mode frequencies (ascending) and momentum weights.

    ``method='dense'`` diagonalizes the full symmetric matrix; ``'arrowhead'``
    solves the secular equation of the same matrix in O(N^2); ``'auto'``
    picks dense up to a few hundred modes.
    """
    alpha, z, d = bath.arrowhead(counterterm)
    _check_positive(bath, alpha, z, d)
    if d.size == 0:
        lam, wts = np.array([alpha]), np.array([1.0])
    else:
        if method == "auto":
            method = "dense" if d.size <= _DENSE_MAX else "arrowhead"
        if method == "dense":
            lam, wts = _dense_modes(alpha, z, d)
        elif method == "arrowhead":
            lam, wts = _arrowhead_modes(alpha, z, d)
        else:
            raise ConfigError(f"unknown eigen method {method!r}")
    return NormalModes(np.sqrt(lam), wts)


def exact_kinetic(modes: NormalModes, ctx: ThermalContext) -> float:
    """Exact ``<p^2> / 2M`` of the system particle in the Gibbs state."""
    return float(np.sum(modes.weights * kinetic_per_mode(ctx, modes.frequencies)))


def discrete_partition(modes: NormalModes, bin_width: float) -> PartitionDensity:
    """Histogram of the weights, normalized to a density on bin centers."""
    if not bin_width > 0:
        raise DomainError("bin_width must be positive")
    span = modes.frequencies[-1] - modes.frequencies[0]
    if bin_width > span:
        raise ConfigError(f"bin_width {bin_width:g} exceeds the spectral span {span:g}")
    nbins = int(np.ceil(modes.frequencies[-1] / bin_width)) + 1
    edges = bin_width * np.arange(nbins + 1)
    hist, _ = np.histogram(modes.frequencies, bins=edges, weights=modes.weights)
    return PartitionDensity(0.5 * (edges[:-1] + edges[1:]), hist / bin_width, None,
                            bin_width=bin_width)


def oracle_modes(system: SystemModel, N: int, omega_max: float, epsilon: float = DEFAULT_EPSILON,
                 method: str = "auto", placement: str = "midpoint"):
    """``[(coefficient, NormalModes), ...]`` whose weighted energies give the oracle.

    A pinned system needs one bath.  A free particle is pinned at ``epsilon``
    and ``2 epsilon``; the proxy energy is even in epsilon, so the
    combination ``(4 E(eps) - E(2 eps)) / 3`` removes the leading bias.
    """
    def modes(eps):
        return normal_modes(build_bath(system.kernel, system, N, omega_max, eps, placement), method)

    if not system.is_free:
        return [(1.0, modes(epsilon))]
    return [(4.0 / 3.0, modes(epsilon)), (-1.0 / 3.0, modes(2 * epsilon))]


def oracle_kinetic(system: SystemModel, ctx: ThermalContext, N: int, omega_max: float,
                   epsilon: float = DEFAULT_EPSILON, method: str = "auto",
                   placement: str = "midpoint") -> float:
    """Finite-bath kinetic energy of ``system`` (extrapolated to zero pinning if free)."""
    parts = oracle_modes(system, N, omega_max, epsilon, method, placement)
    return sum(c * exact_kinetic(m, ctx) for c, m in parts)
