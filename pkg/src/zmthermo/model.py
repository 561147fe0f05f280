"""Potential parameters, thermal state and the dimensionless parameter map.

All quantities are in natural units (hbar = k_B = 1).  The potential is

.. math:: V(x) = \\tfrac12 m\\omega^2 x^2 + \\tfrac{\\lambda}{4} x^4 .

Downstream code works with the mass-rescaled coordinate ``u = sqrt(m) x``, in
which the kinetic term has unit mass and the quartic coupling becomes
``lambda / m**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike


@dataclass(frozen=True)
class PotentialSpec:
    """Quadratic plus quartic single-well potential.

    Parameters
    ----------
    mass : float
        Particle mass, strictly positive.
    omega : float
        Harmonic frequency, non-negative.  ``omega = 0`` is the massless case.
    coupling : float
        Quartic coupling ``lambda``, non-negative.
    """

    mass: float = 1.0
    omega: float = 1.0
    coupling: float = 0.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.omega >= 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if not self.coupling >= 0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")
        if self.omega == 0 and self.coupling == 0:
            raise ValueError("omega and coupling cannot both vanish")

    @property
    def rescaled_coupling(self) -> float:
        """Quartic coupling seen by the mass-rescaled coordinate, lambda/m^2."""
        return self.coupling / self.mass**2

    def rescale(self, x: ArrayLike):
        """Map a position to the mass-rescaled coordinate ``sqrt(m) x``."""
        return np.sqrt(self.mass) * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature ``beta`` and its reciprocal ``T``."""

    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    @classmethod
    def from_temperature(cls, T: float) -> "ThermalState":
        if not T > 0:
            raise ValueError(f"temperature must be positive, got {T}")
        return cls(1.0 / T)

    @property
    def T(self) -> float:
        return 1.0 / self.beta


@dataclass(frozen=True)
class DimensionlessView:
    """Coupling ``g = lambda/(m^2 omega^3)`` and ``theta = omega * beta``."""

    g: float
    theta: float


def potential_value(spec: PotentialSpec, x: ArrayLike):
    """Evaluate V(x) = m omega^2 x^2 / 2 + lambda x^4 / 4."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return 0.5 * spec.mass * spec.omega**2 * x2 + 0.25 * spec.coupling * x2 * x2


def to_dimensionless(spec: PotentialSpec, state: ThermalState) -> DimensionlessView:
    """Return the dimensionless coupling and inverse temperature.

    Raises
    ------
    ValueError
        If ``omega == 0``; the massless case has no dimensionless view and
        callers must stay with dimensionful parameters.
    """
    if spec.omega == 0:
        raise ValueError("massless-mode view undefined: omega = 0")
    g = spec.coupling / (spec.mass**2 * spec.omega**3)
    return DimensionlessView(g=g, theta=spec.omega * state.beta)


def from_dimensionless(
    view: DimensionlessView, mass: float = 1.0, omega: float = 1.0
) -> tuple[PotentialSpec, ThermalState]:
    """Inverse of :func:`to_dimensionless` for a chosen mass and frequency."""
    if not omega > 0:
        raise ValueError("omega must be positive to leave the dimensionless view")
    spec = PotentialSpec(mass=mass, omega=omega, coupling=view.g * mass**2 * omega**3)
    return spec, ThermalState(view.theta / omega)


def effective_frequency(spec: PotentialSpec, x0: ArrayLike):
    """Curvature frequency sqrt(V''(x0)/m) = sqrt(omega^2 + 3 lambda x0^2 / m)."""
    x0 = np.asarray(x0, dtype=float)
    return np.sqrt(spec.omega**2 + 3.0 * spec.coupling * x0 * x0 / spec.mass)


def linear_source(spec: PotentialSpec, x0: ArrayLike):
    """Source term V'(x0)/m = omega^2 x0 + lambda x0^3 / m.

    This is the coefficient of the fluctuation-linear term once the action is
    expanded about a constant path ``x0``.  It is odd in ``x0``.
    """
    x0 = np.asarray(x0, dtype=float)
    return spec.omega**2 * x0 + spec.coupling * (x0 * x0 * x0) / spec.mass
