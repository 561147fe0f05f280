"""
Free energy and specific heat of the quartic oscillator
=======================================================

Five estimates of the thermodynamics of ``V = x^2/2 + 0.4 x^4/4``:
the classical phase-space integral, the quadratic zero-mode approximation,
its first-order improvement, one-loop perturbation theory and the exact
level sum.  The same table comes out of ``zmthermo thermo`` as CSV.
"""

import numpy as np

from zmthermo import PotentialSpec, thermo_curve

spec = PotentialSpec(mass=1.0, omega=1.0, coupling=0.4)
temps = np.geomspace(0.2, 10.0, 9)
methods = ("classical", "quadratic", "improved", "oneloop", "exact")
curves = {m: thermo_curve(m, spec, temps) for m in methods}

print("free energy")
print("    T   " + "".join(f"{m:>12s}" for m in methods))
for i, T in enumerate(temps):
    print(f"{T:6.3f}  " + "".join(f"{curves[m][i].F:12.5f}" for m in methods))

# Above T ~ 0.5 the improved curve tracks the exact one far more closely than
# the quadratic curve; at T = 0.2 both overshoot.  One-loop theory drifts away
# from the classical 3/4 at high temperature.
print("\nspecific heat")
print("    T   " + "".join(f"{m:>12s}" for m in methods))
for i, T in enumerate(temps):
    print(f"{T:6.3f}  " + "".join(f"{curves[m][i].C:12.5f}" for m in methods))

# Without the harmonic term the quadratic approximation still reaches the
# equipartition value 1/2 + 1/4.
massless = PotentialSpec(mass=1.0, omega=0.0, coupling=0.4)
for p in thermo_curve("quadratic", massless, [1.0, 10.0, 100.0]):
    print(f"omega = 0, T = {p.T:6.1f}:  C = {p.C:.5f}")
