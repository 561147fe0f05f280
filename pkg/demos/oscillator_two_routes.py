"""
Harmonic oscillator by two routes
=================================

The free energy of a harmonic oscillator follows from the familiar sum over
levels.  It also follows from fixing the common endpoint ``x0`` of
imaginary-time paths, integrating the fluctuations that vanish at both ends
and only then integrating over ``x0``.  This script compares the two and looks
at the sine series that describes such non-periodic paths.
"""

import numpy as np

from zmthermo import series, zeromode
from zmthermo.series import SampledPath

# Both routes over four decades of beta * omega.
for bw in (0.05, 0.5, 5.0, 50.0):
    closed = zeromode.sho_free_energy_closed(1.0, bw)
    boundary = -np.log(zeromode.sho_partition_boundary(1.0, bw)) / bw
    print(f"beta*omega = {bw:6.2f}   F = {closed: .15f}   difference {boundary - closed: .1e}")

# The classical path through x0 = 1 is not periodic: its slope jumps between
# the two ends.  A sine series about x0 captures that jump.
path = SampledPath.from_function(lambda t: zeromode.classical_path(1.0, 1.0, 1.0, t), 1.0, 40001)
coeffs = series.sine_coefficients(path, 10_000)
target = 2 * (np.cosh(1.0) - 1) / np.sinh(1.0)
for n in (10, 100, 1000, 10_000):
    print(f"N = {n:6d}   slope jump {series.derivative_jump(coeffs, n):.6f}   (limit {target:.6f})")

# A periodic path has no jump; its partial sums decay like 1/N.
wave = SampledPath.from_function(lambda t: 0.5 * np.cos(2 * np.pi * t), 1.0, 40001)
wave_coeffs = series.sine_coefficients(wave, 10_000)
for n in (100, 1000, 10_000):
    print(f"N = {n:6d}   periodic slope jump {series.derivative_jump(wave_coeffs, n):.2e}")
