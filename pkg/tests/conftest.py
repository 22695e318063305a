import numpy as np
import pytest
from hypothesis import settings, strategies as st

from qpartition import MemoryKernel, SystemModel

# fixed example sequence so every run checks the same parameter points
settings.register_profile("reproducible", derandomize=True, deadline=None)
settings.load_profile("reproducible")

KERNEL_FACTORIES = {
    "drude": lambda g, wc: MemoryKernel.drude(g, wc),
    "strict_ohmic": lambda g, wc: MemoryKernel.strict_ohmic(g),
    "algebraic_cutoff": lambda g, wc: MemoryKernel.algebraic_cutoff(g, wc),
}
FINITE_KERNELS = ("drude", "algebraic_cutoff")


def make_system(model, kernel, mass=1.0, omega0=1.0, gamma0=1.0, omega_c=10.0):
    k = KERNEL_FACTORIES[kernel](gamma0, omega_c)
    if model == "free":
        return SystemModel.free(mass, k)
    return SystemModel.oscillator(mass, omega0, k)


def random_system(rng, model, kernel):
    """Parameters spread over two or three decades around unity."""
    return make_system(model, kernel,
                       mass=10 ** rng.uniform(-1, 1),
                       omega0=10 ** rng.uniform(-1, 1),
                       gamma0=10 ** rng.uniform(-1.5, 1),
                       omega_c=10 ** rng.uniform(-0.5, 1.5))


positive = st.floats(min_value=0.05, max_value=20.0, allow_nan=False, allow_infinity=False)
kernel_names = st.sampled_from(sorted(KERNEL_FACTORIES))
model_names = st.sampled_from(["free", "oscillator"])


@st.composite
def systems(draw, kernels=kernel_names):
    return make_system(draw(model_names), draw(kernels), draw(positive), draw(positive),
                       draw(positive), draw(positive))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


# one line per acceptance criterion, echoed after the test session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
