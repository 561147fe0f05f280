"""
Ground-state energies from the quadratic free energy
====================================================

The quadratic approximation to ``F(T)`` rises from its high-temperature
branch, peaks and then turns down where the approximation fails.  The peak
value is a variational-like estimate of the ground-state energy.  Here it is
set against energies from diagonalising the Hamiltonian.
"""

from zmthermo import PotentialSpec, ground_state_estimate
from zmthermo.oracle import spectrum

print(f"{'lambda':>8s} {'exact':>9s} {'quadratic':>10s} {'error %':>8s}")
for lam in (0.008, 0.04, 0.4, 1.2, 2.0, 4.0, 8.0, 200.0):
    spec = PotentialSpec(1.0, 1.0, lam)
    exact = spectrum(spec).E0
    estimate = ground_state_estimate(spec)
    print(f"{lam:8.3f} {exact:9.5f} {estimate:10.5f} {100 * (estimate - exact) / exact:8.2f}")
