"""Thermodynamics of the quartic oscillator from a zero-mode path integral.

Paths with coincident endpoints are split into their common boundary value
``x0`` and a fluctuation that vanishes at both ends.  Integrating out the
fluctuation to quadratic order, then adding the first cubic and quartic
insertion, gives partition functions that interpolate between the classical
high-temperature limit and the quantum regime.

Modules
-------
model      potential parameters and the dimensionless map
series     sine-series expansion of non-periodic paths
green      Dirichlet Green function, determinant and kernel integrals
zeromode   quadratic weight, first correction and zero-mode integrals
thermo     F, U, C per method; ground-state estimate; T_min
oracle     exact spectra and first-order perturbation theory
cli        batch command line
"""
__version__ = "0.1.0"

from .model import PotentialSpec, ThermalState, DimensionlessView  # noqa: E402
from .thermo import Method, ThermoPoint, free_energy, thermo_curve  # noqa: E402
from .thermo import ground_state_estimate, t_min  # noqa: E402

__all__ = [
    "PotentialSpec",
    "ThermalState",
    "DimensionlessView",
    "Method",
    "ThermoPoint",
    "free_energy",
    "thermo_curve",
    "ground_state_estimate",
    "t_min",
]
