"""
Normalization from a dispersion relation
========================================

P(omega) integrates to one because chi(0) = M: the static response of the
momentum is the mass, whatever the friction.  The Kramers-Kronig
transform rebuilds chi'(omega) from chi''(omega) alone, so chi(0) = M can be
checked numerically, and the whole verification matrix runs in seconds.
"""

from qpartition import MemoryKernel, SystemModel, kk_real_from_imag, run_suite, susceptibility

for mass in (0.5, 2.0):
    for k in (MemoryKernel.drude(0.3, 2.0), MemoryKernel.algebraic_cutoff(5.0, 1.0)):
        s = SystemModel.oscillator(mass, 1.5, k)
        print(f"M = {mass}, {k.model.value:16s} chi(0) from KK = {kk_real_from_imag(s, 0.0):.10f}")

# Away from zero the transform needs a principal value; near a sharp line
# the excision window shrinks with the line width.
s = SystemModel.oscillator(1.0, 10.0, MemoryKernel.drude(0.05, 0.5))
for w in (5.0, 9.99, 10.0, 10.01, 20.0):
    print(f"omega = {w:6.2f}: KK {kk_real_from_imag(s, w):+.8f}  "
          f"closed form {susceptibility(s, w).real:+.8f}")

reports = run_suite()
print(f"{sum(r.passed for r in reports)} / {len(reports)} checks pass")
# Forgetting the 1/M in the normalization is only invisible at M = 1.
broken = run_suite(mass_prefactor=False)
print(f"without 1/M: {sum(not r.passed for r in broken)} checks fail")
