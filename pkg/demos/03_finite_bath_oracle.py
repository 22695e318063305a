"""
An exact check with a few thousand oscillators
==============================================

Discretize the bath into N harmonic modes, diagonalize the coupled
system, and the kinetic energy becomes a finite sum over normal modes
with weights w_k.  The weights are an exact discrete partition density,
and the sum converges to the continuum integral as N grows.
"""

import time

import numpy as np

from qpartition import (MemoryKernel, SystemModel, ThermalContext, build_bath, discrete_partition,
                        exact_kinetic, mean_kinetic_energy, normal_modes)
from qpartition.partition import density

from _plotting import figure, save

system = SystemModel.oscillator(1.0, 1.0, MemoryKernel.drude(1.0, 10.0))

for N in (250, 1000, 4000):
    t0 = time.perf_counter()
    modes = normal_modes(build_bath(system.kernel, system, N, 400.0))
    elapsed = time.perf_counter() - t0
    print(f"N = {N:5d}: sum w = {modes.weights.sum():.15f}, "
          f"lowest mode {modes.frequencies[0]:.6f}, {elapsed:.2f}s")
    for T in (0.1, 1.0, 10.0):
        ctx = ThermalContext(T)
        oracle = exact_kinetic(modes, ctx)
        continuum = mean_kinetic_energy(system, ctx).energy
        print(f"    T = {T:5.1f}: oracle {oracle:.8f}  continuum {continuum:.8f}  "
              f"rel {abs(oracle - continuum) / oracle:.1e}")

# Without the counter-term a strongly coupled bath would pull the
# potential below zero; the library refuses that matrix.
strong = SystemModel.oscillator(1.0, 1.0, MemoryKernel.drude(50.0, 10.0))
bath = build_bath(strong.kernel, strong, 200, 100.0)
print("lowest eigenvalue without counter-term:",
      np.linalg.eigvalsh(bath.potential_matrix(counterterm=False))[0])

plt = figure()
if plt is not None:
    modes = normal_modes(build_bath(system.kernel, system, 4000, 400.0))
    hist = discrete_partition(modes, 0.05)
    w = np.linspace(0, 4, 801)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(hist.grid, hist.values, where="mid", label="normal-mode weights")
    ax.plot(w, density(system, w), label="continuum P")
    ax.set_xlim(0, 4)
    ax.set_xlabel("omega")
    ax.legend()
    save(plt, fig, "finite_bath.png")
