"""
Where the quadratic approximation stops working
===============================================

The Gaussian average of the cubic and quartic remainder of the action grows
with inverse temperature.  Once it reaches 1 the quadratic expansion about
the zero mode is no longer a small correction, which defines ``T_min`` as a
function of the dimensionless coupling ``g``.
"""

from zmthermo import PotentialSpec, t_min
from zmthermo import zeromode

for g in (0.01, 0.1, 1.0, 10.0, 50.0, 200.0):
    print(f"g = {g:7.2f}   T_min = {t_min(g):.4f}")

# Approaching T_min from above, the first-order correction eats the quadratic
# result and Z2 + dZ eventually turns negative.
spec = PotentialSpec(1.0, 1.0, 0.4)
print(f"\nT_min at lambda = 0.4: {t_min(0.4):.4f}")
for T in (0.2, 0.1, 0.08, 0.06, 0.05, 0.04):
    sums = zeromode.zero_mode_sums(spec, 1.0 / T)
    print(f"T = {T:5.3f}   dZ/Z2 = {sums.correction_ratio: .3f}")
