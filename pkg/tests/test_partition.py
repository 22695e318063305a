import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpartition import (ConfigError, DivergenceError, DomainError, GridSpec, MemoryKernel,
                        QuadSpec, SystemModel, ThermalContext, fdt_kinetic_energy,
                        kinetic_per_mode, mean_kinetic_energy, normalization, partition_density)
from qpartition._quadrature import integrate_gl
from qpartition.partition import density, tail_exponent
from qpartition.response import spectral_features

from conftest import FINITE_KERNELS, make_system, positive, systems

finite_systems = systems(kernels=st.sampled_from(FINITE_KERNELS))


def test_kinetic_per_mode_examples():
    assert kinetic_per_mode(ThermalContext(2.0), 0.0) == 1.0
    assert kinetic_per_mode(ThermalContext(2.0), 1e-9) == pytest.approx(1.0, rel=1e-15)
    assert kinetic_per_mode(ThermalContext(0.0), 1.0) == 0.25
    coth1 = (math.e**2 + 1) / (math.e**2 - 1)
    assert kinetic_per_mode(ThermalContext(1.0), 2.0) == pytest.approx(0.5 * coth1, rel=1e-15)
    assert kinetic_per_mode(ThermalContext(1.0), 2.0) == pytest.approx(0.656518, abs=1e-6)
    with pytest.raises(DomainError):
        kinetic_per_mode(ThermalContext(0.0), 0.0)
    with pytest.raises(DomainError):
        kinetic_per_mode(ThermalContext(1.0), -1.0)


def test_kinetic_per_mode_units():
    ctx = ThermalContext(3.0, hbar=0.5, kB=2.0)
    w = 7.0
    x = ctx.hbar * w / (2 * ctx.kB * ctx.temperature)
    assert kinetic_per_mode(ctx, w) == pytest.approx(ctx.hbar * w / 4 / math.tanh(x), rel=1e-15)


def test_series_switch_is_smooth():
    # both sides of the switch agree with the exact expression to rounding
    ctx = ThermalContext(1.0)
    for x in (0.5e-4, 0.99e-4, 1.01e-4, 2e-4):
        w = 2 * x
        exact = 0.5 * x / math.tanh(x)
        assert kinetic_per_mode(ctx, w) == pytest.approx(exact, rel=2e-16)


@given(T=positive, w=st.floats(0, 1e6))
def test_kinetic_per_mode_bounds(T, w):
    ctx = ThermalContext(T)
    e = kinetic_per_mode(ctx, w)
    assert e >= ctx.thermal_energy / 2 * (1 - 1e-15)
    assert e >= w / 4 * (1 - 1e-15)


def test_thermal_context_validation():
    for bad in (dict(temperature=-1), dict(temperature=1, hbar=0), dict(temperature=1, kB=-1)):
        with pytest.raises(ConfigError):
            ThermalContext(**bad)


def test_ohmic_free_closed_form():
    M, g0 = 1.0, 1.0
    s = SystemModel.free(M, MemoryKernel.strict_ohmic(g0))
    pd = partition_density(s, GridSpec(10.0, 1001))
    assert pd.values[0] == pytest.approx(2 / np.pi, rel=1e-15)
    ref = 2 / np.pi * M * g0 / (g0**2 + M**2 * pd.grid**2)
    np.testing.assert_allclose(pd.values, ref, rtol=1e-12, atol=0)
    assert pd.tail_exponent == 2


def test_tail_exponents():
    expect = {"drude": 4, "strict_ohmic": 2, "algebraic_cutoff": 6}
    for k, p in expect.items():
        for model in ("free", "oscillator"):
            s = make_system(model, k)
            assert tail_exponent(s) == p
            # measured slope between two far frequencies
            w = 1e6
            slope = np.log(density(s, w) / density(s, 2 * w)) / np.log(2)
            assert slope == pytest.approx(p, abs=1e-3)


def test_origin_values():
    free = make_system("free", "drude", mass=2.0, gamma0=0.5)
    assert density(free, 0.0) == pytest.approx(2 / (np.pi * 2.0) * 4.0 / 0.5)
    assert density(free, 0.0) == pytest.approx(density(free, 1e-7), rel=1e-6)
    osc = make_system("oscillator", "drude")
    assert density(osc, 0.0) == 0.0


@settings(max_examples=40, deadline=None)
@given(s=systems())
def test_density_nonnegative(s):
    pd = partition_density(s, GridSpec(100 * s.frequency_scale, 500, "log"))
    assert np.all(pd.values >= 0)


@settings(max_examples=30, deadline=None)
@given(s=systems())
def test_normalization(s):
    value, err = normalization(s)
    assert value == pytest.approx(1.0, abs=1e-6)
    assert err < 1e-6


@pytest.mark.parametrize("model", ["free", "oscillator"])
@pytest.mark.parametrize("kernel", ["drude", "strict_ohmic", "algebraic_cutoff"])
def test_sampled_grid_mass(model, kernel):
    # trapezoid on a dense log grid plus the analytic power tail
    s = make_system(model, kernel)
    pd = partition_density(s, GridSpec(1e5, 200001, "log", omega_min=1e-6))
    assert pd.total_mass() == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(s=finite_systems, T=st.floats(0.01, 100))
def test_quantum_lower_bound(s, T):
    ctx = ThermalContext(T)
    assert mean_kinetic_energy(s, ctx).energy >= ctx.thermal_energy / 2


@settings(max_examples=15, deadline=None)
@given(s=finite_systems, T1=st.floats(0.01, 50), factor=st.floats(1.05, 20))
def test_monotone_in_temperature(s, T1, factor):
    e1 = mean_kinetic_energy(s, ThermalContext(T1)).energy
    e2 = mean_kinetic_energy(s, ThermalContext(T1 * factor)).energy
    assert e2 > e1


@settings(max_examples=20, deadline=None)
@given(s=finite_systems, T=st.floats(0.0, 100))
def test_two_routes_agree(s, T):
    ctx = ThermalContext(T)
    direct = mean_kinetic_energy(s, ctx)
    fdt = fdt_kinetic_energy(s, ctx)
    assert fdt.energy == pytest.approx(direct.energy, rel=1e-10)
    assert fdt.p2 == pytest.approx(2 * s.mass * direct.energy, rel=1e-10)


def test_zero_temperature_reduction():
    # T = 0 energy against (hbar/4) int omega P with the Gauss-Legendre route
    s = make_system("free", "drude")
    e0 = mean_kinetic_energy(s, ThermalContext(0.0)).energy
    ref, _, _ = integrate_gl(lambda w: w * density(s, w), spectral_features(s))
    assert np.isfinite(e0)
    assert e0 == pytest.approx(ref / 4, rel=1e-8)


def test_zero_temperature_free_drude_closed_form():
    # E_0 = (hbar / 2 pi) int chi'' d omega, evaluated in extended precision
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    M, g0, wc = 1, 1, 10

    def chi2(w):
        g = g0 * wc / (wc - 1j * w)
        return mpmath.im(M * g / (g - 1j * w * M))

    ref = mpmath.quad(lambda w: chi2(w) / (2 * mpmath.pi), [0, 1, 10, 100, mpmath.inf])
    e0 = mean_kinetic_energy(make_system("free", "drude"), ThermalContext(0.0)).energy
    assert e0 == pytest.approx(float(ref), rel=1e-9)


def test_classical_limit_for_energy():
    s = make_system("oscillator", "drude")
    ctx = ThermalContext(1e4)
    assert mean_kinetic_energy(s, ctx).energy / (ctx.thermal_energy / 2) == pytest.approx(1, abs=1e-3)


@pytest.mark.parametrize("T", [0.0, 1.0, 1000.0])
@pytest.mark.parametrize("model", ["free", "oscillator"])
def test_ohmic_energy_diverges(model, T):
    s = make_system(model, "strict_ohmic")
    with pytest.raises(DivergenceError, match="logarithmic"):
        mean_kinetic_energy(s, ThermalContext(T))
    with pytest.raises(DivergenceError):
        fdt_kinetic_energy(s, ThermalContext(T))


def test_ohmic_truncated_energy_grows_like_log():
    # with a hard cutoff the energy is finite but grows like log(omega_max)
    s = make_system("free", "strict_ohmic")
    ctx = ThermalContext(1.0)
    vals = []
    for wmax in (1e2, 1e3, 1e4):
        w = np.geomspace(1e-8, wmax, 200001)
        vals.append(np.trapezoid(kinetic_per_mode(ctx, w) * density(s, w), w))
    steps = np.diff(vals)
    # each decade adds (1/4)(2/pi) ln 10 for M = g0 = 1
    np.testing.assert_allclose(steps, np.log(10) / (2 * np.pi), rtol=1e-3)


def test_kinetic_energy_record():
    s = make_system("oscillator", "algebraic_cutoff", mass=3.0)
    r = mean_kinetic_energy(s, ThermalContext(0.5))
    assert r.p2 == 2 * 3.0 * r.energy
    assert float(r) == r.energy
    assert r.error < 1e-10
    assert r.omega_max > 0


@pytest.mark.parametrize("bad", [dict(omega_max=0, n_points=10), dict(omega_max=1, n_points=1),
                                 dict(omega_max=1, n_points=10, spacing="cubic"),
                                 dict(omega_max=1, n_points=2.5)])
def test_grid_validation(bad):
    with pytest.raises(ConfigError):
        GridSpec(**bad)


def test_grid_round_trip():
    for g in (GridSpec(5.0, 11), GridSpec(5.0, 11, "log", omega_min=1e-3)):
        assert GridSpec.from_dict(g.to_dict()) == g
    with pytest.raises(ConfigError):
        GridSpec.from_dict({"omega_max": 1.0})
    q = QuadSpec(1e-9, 1e-11, 1e-7)
    assert QuadSpec.from_dict(q.to_dict()) == q


def test_grid_layout():
    lin = GridSpec(2.0, 5).frequencies()
    np.testing.assert_array_equal(lin, [0, 0.5, 1, 1.5, 2])
    log = GridSpec(100.0, 4, "log").frequencies()
    assert log[0] == 0 and log[-1] == pytest.approx(100) and np.all(np.diff(log) > 0)
