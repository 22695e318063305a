"""
Where the kinetic energy lives
==============================

A damped particle does not have one frequency.  Its kinetic energy is an
average of single-oscillator energies over a density P(omega) fixed by the
absorptive part of the momentum susceptibility.  This script tabulates
P(omega) for the three friction models and checks that each integrates to
one.
"""

import numpy as np

from qpartition import GridSpec, MemoryKernel, SystemModel, normalization, partition_density

from _plotting import figure, save

kernels = {
    "Drude(1, 10)": MemoryKernel.drude(1.0, 10.0),
    "strict Ohmic(1)": MemoryKernel.strict_ohmic(1.0),
    "algebraic(1, 10)": MemoryKernel.algebraic_cutoff(1.0, 10.0),
}

# A free particle spreads its weight from zero frequency upward; the
# value at the origin is 2 M / (pi gamma0) for every kernel.
print("free particle, M = 1")
for name, k in kernels.items():
    s = SystemModel.free(1.0, k)
    value, err = normalization(s)
    p0 = partition_density(s, GridSpec(1.0, 2)).values[0]
    print(f"  {name:18s} P(0) = {p0:.6f}   int P = {value:.12f} +- {err:.1e}")

# A pinned particle moves the weight to its trap frequency and P(0) = 0.
print("oscillator, M = 1, omega0 = 3")
for name, k in kernels.items():
    s = SystemModel.oscillator(1.0, 3.0, k)
    value, err = normalization(s)
    grid = partition_density(s, GridSpec(20.0, 4001))
    peak = grid.grid[np.argmax(grid.values)]
    print(f"  {name:18s} peak at {peak:.3f}   int P = {value:.12f} +- {err:.1e}")

# The tails differ: omega^-4 for Drude, omega^-2 for strict Ohmic and
# omega^-6 for the algebraic cutoff.  Only the strict-Ohmic tail is too
# slow for the mean energy to exist.
w = 1e4
for name, k in kernels.items():
    s = SystemModel.free(1.0, k)
    pd = partition_density(s, GridSpec(2 * w, 3))
    slope = np.log(pd.values[1] / pd.values[2]) / np.log(2)
    print(f"  {name:18s} tail exponent {slope:.3f} (declared {pd.tail_exponent})")

plt = figure()
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for name, k in kernels.items():
        for ax, s in zip(axes, (SystemModel.free(1.0, k), SystemModel.oscillator(1.0, 3.0, k))):
            pd = partition_density(s, GridSpec(15.0, 1501))
            ax.plot(pd.grid, pd.values, label=name)
    axes[0].set_title("free particle")
    axes[1].set_title("oscillator, omega0 = 3")
    for ax in axes:
        ax.set_xlabel("omega")
        ax.set_ylabel("P(omega)")
        ax.legend()
    save(plt, fig, "partition_density.png")
