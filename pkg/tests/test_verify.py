import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpartition import (AccuracyError, ConfigError, DivergenceError, DomainError, MemoryKernel,
                        SystemModel, ThermalContext, VerificationReport, classical_limit_check,
                        imag_axis_identity, kk_real_from_imag, run_suite, sum_rule_check,
                        susceptibility)
from qpartition.verify import default_systems, kk_check, static_susceptibility_check

from conftest import FINITE_KERNELS, KERNEL_FACTORIES, make_system, systems

KERNELS = sorted(KERNEL_FACTORIES)


def test_kk_static_free_drude():
    assert kk_real_from_imag(make_system("free", "drude"), 0.0) == pytest.approx(1.0, rel=1e-4)


def test_kk_ohmic_free_at_one():
    s = make_system("free", "strict_ohmic")
    assert kk_real_from_imag(s, 1.0) == pytest.approx(0.5, rel=1e-4)


def test_kk_far_above_cutoff():
    s = make_system("free", "drude")
    assert abs(kk_real_from_imag(s, 1e4)) < 1e-4 * s.mass


@pytest.mark.parametrize("model", ["free", "oscillator"])
@pytest.mark.parametrize("kernel", KERNELS)
def test_kk_against_closed_form(model, kernel):
    s = make_system(model, kernel, mass=1.7, omega0=2.0, gamma0=0.8, omega_c=6.0)
    for w in (0.05, 0.5, 1.9, 2.0, 2.1, 7.0, 60.0):
        ref = susceptibility(s, w).real
        assert kk_real_from_imag(s, w) == pytest.approx(ref, abs=1e-4 * max(abs(ref), s.mass))


def test_kk_narrow_line():
    s = make_system("oscillator", "drude", omega0=10.0, gamma0=0.05, omega_c=0.5)
    for w in (9.0, 9.99, 10.0, 10.01, 11.0):
        assert kk_check(s, w).passed


def test_kk_domain_and_self_test():
    s = make_system("oscillator", "drude", omega0=3.0, gamma0=0.3)
    with pytest.raises(DomainError):
        kk_real_from_imag(s, -1.0)
    # an excision window as wide as the line itself cannot pass the halving test
    with pytest.raises(AccuracyError):
        kk_real_from_imag(s, 3.2, delta_factor=0.5)


@settings(max_examples=25, deadline=None)
@given(s=systems())
def test_sum_rule(s):
    r = sum_rule_check(s)
    assert r.passed, r
    assert r.kind == "abs" and r.tolerance == 1e-6


def test_sum_rule_without_mass_prefactor_fails():
    for model in ("free", "oscillator"):
        for kernel in KERNELS:
            s = make_system(model, kernel, mass=2.0)
            assert sum_rule_check(s).passed
            bad = sum_rule_check(s, mass_prefactor=False)
            assert not bad.passed
            assert bad.computed == pytest.approx(2.0, rel=1e-6)


@settings(max_examples=20, deadline=None)
@given(s=systems())
def test_static_kk_equals_sum_rule_times_mass(s):
    # the two integrands are assembled independently
    kk = kk_real_from_imag(s, 0.0)
    sr = sum_rule_check(s).computed
    assert kk == pytest.approx(sr * s.mass, rel=1e-9)
    assert static_susceptibility_check(s).passed


def test_imag_axis_examples():
    free = make_system("free", "strict_ohmic")
    r = imag_axis_identity(free, 1.0)
    assert r.expected == pytest.approx(0.5) and r.computed == pytest.approx(0.5, rel=1e-6)
    assert imag_axis_identity(make_system("oscillator", "drude"), 2.0).passed
    tiny = imag_axis_identity(make_system("free", "drude"), 1e-6)
    assert tiny.computed == pytest.approx(1.0, rel=1e-5) and tiny.passed
    with pytest.raises(DomainError):
        imag_axis_identity(free, 0.0)


@settings(max_examples=25, deadline=None)
@given(s=systems(), x=st.floats(-2, 2))
def test_imag_axis_random(s, x):
    assert imag_axis_identity(s, s.frequency_scale * 10 ** x).passed


def test_classical_limit_examples():
    s = make_system("free", "drude")
    r = classical_limit_check(s, ThermalContext(1e4))
    assert r.passed and r.tolerance == 1e-3
    for kernel in FINITE_KERNELS:
        assert classical_limit_check(make_system("oscillator", kernel), ThermalContext(1e4)).passed
    r = classical_limit_check(make_system("oscillator", "drude"), ThermalContext(1500.0))
    assert r.tolerance == 1e-2 and r.passed


def test_classical_limit_ohmic_diverges():
    for model in ("free", "oscillator"):
        with pytest.raises(DivergenceError):
            classical_limit_check(make_system(model, "strict_ohmic"), ThermalContext(1e3))


def test_classical_limit_precondition():
    with pytest.raises(ConfigError):
        classical_limit_check(make_system("free", "drude"), ThermalContext(500.0))


def test_report_semantics():
    r = VerificationReport("x", 1.0, 1.05, 0.1)
    assert r.passed and r.deviation == pytest.approx(0.05)
    assert not VerificationReport("x", 1.0, 1.2, 0.1).passed
    assert VerificationReport("x", 0.0, 0.05, 0.1, "rel", scale=1.0).passed
    assert not VerificationReport("x", 0.0, 0.05, 0.01, "abs").passed
    assert not VerificationReport("x", 1.0, float("nan"), 0.1).passed
    with pytest.raises(ConfigError):
        VerificationReport("x", 1.0, 1.0, 0.1, "ulp")
    d = VerificationReport("x", 1.0, 1.05, 0.1).to_dict()
    assert d["passed"] and d["deviation"] == pytest.approx(0.05)


def test_reports_are_reproducible():
    s = make_system("oscillator", "algebraic_cutoff")
    a = [kk_check(s, 1.3).to_dict(), sum_rule_check(s).to_dict(), imag_axis_identity(s, 2).to_dict()]
    b = [kk_check(s, 1.3).to_dict(), sum_rule_check(s).to_dict(), imag_axis_identity(s, 2).to_dict()]
    assert a == b


def test_full_suite():
    reports = run_suite()
    assert all(r.passed for r in reports), [r for r in reports if not r.passed]
    names = {r.check_name for r in reports}
    assert names == {"sum_rule", "kk_static", "kk_real", "imag_axis", "classical_limit"}
    assert all(s.mass != 1 for s in default_systems())


def test_full_suite_detects_dropped_prefactor():
    reports = run_suite(mass_prefactor=False)
    sums = [r for r in reports if r.check_name == "sum_rule"]
    assert sums and not any(r.passed for r in sums)


def test_suite_concurrency_preserves_order():
    systems_ = default_systems()[:2]
    serial = [r.to_dict() for r in run_suite(systems_)]
    threaded = [r.to_dict() for r in run_suite(systems_, jobs=3)]
    assert serial == threaded
