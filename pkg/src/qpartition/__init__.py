"""Quantum energy partition for dissipative systems.

The mean kinetic energy of a damped quantum particle is an average of
single-oscillator thermal kinetic energies over a probability density
``P(omega)`` built from the absorptive part of the momentum susceptibility.
This package computes ``P(omega)`` and the energy for free and pinned
particles under Drude, strict-Ohmic and algebraic-cutoff friction, and
checks both against Kramers-Kronig identities and an exact finite-bath model.
"""

from .bath import (FiniteBath, NormalModes, build_bath, discrete_partition, exact_kinetic,
                   normal_modes, oracle_kinetic, oracle_modes)
from .config import RunConfig, load_config
from .errors import (AccuracyError, ConfigError, DivergenceError, DomainError, NumericalError,
                     PartitionError, SingularityError)
from .kernels import KernelModel, MemoryKernel, laplace_kernel, spectral_density
from .partition import (GridSpec, KineticEnergy, PartitionDensity, QuadSpec, ThermalContext,
                        fdt_kinetic_energy, kinetic_per_mode, mean_kinetic_energy, normalization,
                        partition_density)
from .response import (Susceptibility, SystemModel, absorptive, susceptibility,
                       susceptibility_free, susceptibility_imag_axis, susceptibility_oscillator)
from .verify import (VerificationReport, classical_limit_check, imag_axis_identity,
                     kk_real_from_imag, run_suite, sum_rule_check)

__version__ = "0.1.0"
