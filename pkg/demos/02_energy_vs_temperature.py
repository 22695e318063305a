"""
Kinetic energy from zero temperature to the classical limit
===========================================================

At high temperature every mode carries k_B T / 2 and the density no longer
matters.  At low temperature the zero-point energy of the bath modes
sets a floor that equipartition misses.  Both routes to the energy (the
partition average and the fluctuation-dissipation integral) are computed
side by side.
"""

import numpy as np

from qpartition import (DivergenceError, MemoryKernel, SystemModel, ThermalContext,
                        fdt_kinetic_energy, mean_kinetic_energy)

from _plotting import figure, save

system = SystemModel.oscillator(1.0, 1.0, MemoryKernel.drude(1.0, 10.0))
temps = np.geomspace(1e-3, 1e4, 15)

print(f"{'T':>10s} {'E_k':>14s} {'E_k (FDT)':>14s} {'E_k / (T/2)':>12s}")
energies = []
for T in temps:
    ctx = ThermalContext(T)
    e = mean_kinetic_energy(system, ctx).energy
    e_fdt = fdt_kinetic_energy(system, ctx).energy
    energies.append(e)
    print(f"{T:10.3g} {e:14.8f} {e_fdt:14.8f} {e / (T / 2):12.6f}")

zero_point = mean_kinetic_energy(system, ThermalContext(0.0)).energy
# An undamped oscillator would have hbar omega0 / 4 = 0.25; friction
# mixes in higher bath frequencies and raises it.
print(f"T = 0: E_k = {zero_point:.8f} (undamped value 0.25)")

# Memoryless friction leaves a logarithmically divergent tail at every
# temperature, which the library reports rather than truncating.
try:
    mean_kinetic_energy(SystemModel.free(1.0, MemoryKernel.strict_ohmic(1.0)), ThermalContext(1.0))
except DivergenceError as exc:
    print(f"strict Ohmic: {exc}")

plt = figure()
if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(temps, energies, "o-", label="E_k")
    ax.loglog(temps, temps / 2, "--", label="k_B T / 2")
    ax.axhline(zero_point, color="gray", lw=0.8, label="T = 0")
    ax.set_xlabel("T")
    ax.set_ylabel("E_k")
    ax.legend()
    save(plt, fig, "energy_vs_temperature.png")
